//! Configuration-driven experiment runner behind the `multcorr` binary.
//!
//! A run reads a TOML config, executes one experiment kind on a rayon pool of
//! the requested size and writes into the output directory:
//!
//! - `<name>.csv` (and `<name>_<table>.csv` for secondary tables), each
//!   starting with a comment line carrying the config SHA-256 and seed;
//! - `<name>.summary.txt` with one PASS/FAIL line per assertion;
//! - `<name>.timing.txt` with the wall-clock time, kept out of the CSVs so
//!   reruns reproduce them byte for byte.

mod config;
mod kinds;
mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{
    AssertSection, BodyKind, CharsumSection, ExperimentConfig, FlatFormSpec, GridSection, HalfspaceSpec, LinsysSection,
    LocalDensitySection, MajorantSection, MultfuncSection, OutputSection, PMaxSpec, ProbeSpec, WtrickSection,
};
pub use kinds::{alpha_by_residue_scan, execute, Kind};
pub use report::{config_hash, num, Assertion, Column, Report, Table};

use crate::error::{Error, Result};

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
    pub seconds: f64,
}

impl RunOutcome {
    /// 0 when every assertion passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

pub fn run(kind: Kind, config_path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let (mut cfg, bytes) = ExperimentConfig::load(config_path)?;
    if let Some(k) = &cfg.kind {
        if k != kind.name() {
            return Err(Error::Config {
                field: "kind".into(),
                message: format!("config is for `{k}`, not `{kind}`"),
            });
        }
    }
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    let threads = opts.threads.unwrap_or(cfg.threads);
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("multcorr-out"));
    let stem = cfg.output.name.clone().unwrap_or_else(|| kind.name().to_string());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let report = pool.install(|| execute(kind, &cfg))?;
    let seconds = start.elapsed().as_secs_f64();
    let provenance = format!(
        "multcorr {kind} config_sha256={} seed={}",
        config_hash(&bytes),
        cfg.seed
    );
    let mut files = report.write(&dir, &stem, &provenance)?;
    let timing = dir.join(format!("{stem}.timing.txt"));
    std::fs::write(
        &timing,
        format!(
            "{kind} wall_seconds={seconds:.3} threads={}\n",
            pool.current_num_threads()
        ),
    )?;
    files.push(timing);
    Ok(RunOutcome { report, files, seconds })
}
