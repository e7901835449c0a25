//! Tables, assertions and the artifacts written for one run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Columns as `"name:unit"` pairs.
    pub fn new(name: &str, columns: &[&str]) -> Self {
        let columns = columns
            .iter()
            .map(|c| {
                let (n, u) = c.split_once(':').unwrap_or((c, "1"));
                Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                }
            })
            .collect();
        Self {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, provenance: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {provenance}");
        let units: Vec<String> = self.columns.iter().map(|c| format!("{}={}", c.name, c.unit)).collect();
        let _ = writeln!(s, "# units: {}", units.join(" "));
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(s, "{}", names.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// Shortest round-trip form, so reruns reproduce the bytes.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub kind: String,
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            ..Self::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "multcorr {}", self.kind);
        for a in &self.assertions {
            let _ = writeln!(s, "{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let failed = self.assertions.iter().filter(|a| !a.passed).count();
        let _ = writeln!(
            s,
            "{} of {} assertions passed",
            self.assertions.len() - failed,
            self.assertions.len()
        );
        s
    }

    /// `<stem>.csv` for the first table, `<stem>_<table>.csv` for the others,
    /// `<stem>.summary.txt`. Returns the paths written.
    pub fn write(&self, dir: &Path, stem: &str, provenance: &str) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (i, t) in self.tables.iter().enumerate() {
            let path = if i == 0 {
                dir.join(format!("{stem}.csv"))
            } else {
                dir.join(format!("{stem}_{}.csv", t.name))
            };
            fs::write(&path, t.to_csv(provenance))?;
            out.push(path);
        }
        let path = dir.join(format!("{stem}.summary.txt"));
        fs::write(&path, self.summary())?;
        out.push(path);
        Ok(out)
    }
}

pub fn config_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("main", &["T:count", "ratio"]);
        t.push(vec!["10".into(), num(0.5)]);
        let csv = t.to_csv("multcorr test config_sha256=ab");
        assert_eq!(
            csv,
            "# multcorr test config_sha256=ab\n# units: T=count ratio=1\nT,ratio\n10,5e-1\n"
        );
    }

    #[test]
    fn hash_is_sha256() {
        assert_eq!(
            config_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn summary_counts() {
        let mut r = Report::new("x");
        r.check("a", true, "ok");
        r.check("b", false, "bad");
        assert!(!r.passed());
        assert!(r.summary().contains("FAIL b: bad"));
        assert!(r.summary().ends_with("1 of 2 assertions passed\n"));
    }
}
