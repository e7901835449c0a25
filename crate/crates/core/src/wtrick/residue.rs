use std::collections::BTreeMap;

use crate::arith;
use crate::error::{Error, Result};
use crate::multfunc::{euler_envelope, SieveTable};
use crate::sum::KahanSum;

use super::context::WContext;

/// `S_f(x; modulus, A)` for every `A mod modulus` coprime to `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueMeanTable {
    pub x: u64,
    pub modulus: u64,
    pub means: BTreeMap<u64, f64>,
}

/// One pass over the table, bucketing `f(n)` by `n mod modulus`.
pub fn residue_mean_table(tbl: &SieveTable, x: u64, modulus: u64, wctx: &WContext) -> Result<ResidueMeanTable> {
    if modulus == 0 {
        return Err(Error::InvalidArgument("modulus must be >= 1".into()));
    }
    if x == 0 || x > tbl.len() {
        return Err(Error::OutOfRange(format!("x = {x} outside 1..={}", tbl.len())));
    }
    let mut buckets = vec![KahanSum::new(); modulus as usize];
    for (n, &v) in tbl.values()[1..=x as usize].iter().enumerate() {
        buckets[((n as u64 + 1) % modulus) as usize].add(v);
    }
    let scale = modulus as f64 / x as f64;
    let means = (0..modulus)
        .filter(|&a| arith::gcd(a, wctx.w) == 1)
        .map(|a| (a, buckets[a as usize].value() * scale))
        .collect();
    Ok(ResidueMeanTable { x, modulus, means })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityRow {
    pub x_prime: u64,
    pub raw_delta: f64,
    pub normalized_delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    pub envelope: f64,
    pub rows: Vec<StabilityRow>,
    /// The empirical `stability_phi(x)`: max over the grid of `|normalized_delta|`.
    pub max_normalized: f64,
}

/// Grid size used by [`stability_scan`].
pub const STABILITY_GRID: usize = 64;

/// `S_f(x'; q, A) - S_f(x; q, A)` for `x'` on a geometric grid in
/// `(x (log x)^{-C}, x)`, normalised by
/// `(q/phi(q)) (1/log x) prod_{p <= x, p ∤ q} (1 + |f(p)|/p)`.
pub fn stability_scan(tbl: &SieveTable, x: u64, c: f64, q: u64, a: u64) -> Result<StabilityReport> {
    if x < 3 || x > tbl.len() {
        return Err(Error::OutOfRange(format!("x = {x} outside 3..={}", tbl.len())));
    }
    if q == 0 || arith::gcd(q, a % q) != 1 {
        return Err(Error::Coprimality(format!("need gcd(q, A) = 1, got q = {q}, A = {a}")));
    }
    let log_x = (x as f64).ln();
    if q as f64 >= log_x.powf(c) {
        return Err(Error::OutOfRange(format!(
            "q = {q} must be below (log x)^C = {:.3}",
            log_x.powf(c)
        )));
    }
    let lo = x as f64 / log_x.powf(c);
    let grid: Vec<u64> = (1..=STABILITY_GRID)
        .map(|k| {
            let t = k as f64 / (STABILITY_GRID + 1) as f64;
            (lo * (x as f64 / lo).powf(t)).round() as u64
        })
        .filter(|&v| v >= 1 && (v as f64) > lo && v < x)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let envelope = q as f64 / arith::euler_phi(q) as f64 / log_x * euler_envelope(tbl, x, q, false)?;
    // Progression prefix sums read off at the grid points in one pass.
    let r = a % q;
    let mut n = if r == 0 { q } else { r };
    let mut acc = KahanSum::new();
    let mut at_grid = Vec::with_capacity(grid.len());
    let mut gi = 0;
    while gi < grid.len() || n <= x {
        while gi < grid.len() && n > grid[gi] {
            at_grid.push(acc.value());
            gi += 1;
        }
        if n > x {
            break;
        }
        acc.add(tbl.get(n));
        n += q;
    }
    while gi < grid.len() {
        at_grid.push(acc.value());
        gi += 1;
    }
    let s_x = acc.value() * q as f64 / x as f64;
    let rows: Vec<StabilityRow> = grid
        .iter()
        .zip(&at_grid)
        .map(|(&xp, &sum)| {
            let raw = sum * q as f64 / xp as f64 - s_x;
            StabilityRow {
                x_prime: xp,
                raw_delta: raw,
                normalized_delta: raw / envelope,
            }
        })
        .collect();
    let max_normalized = rows.iter().map(|r| r.normalized_delta.abs()).fold(0.0, f64::max);
    Ok(StabilityReport {
        x,
        q,
        a: r,
        envelope,
        rows,
        max_normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfunc::{build_sieve, mean_value_progression, MultiplicativeFunction};
    use crate::wtrick::{make_wcontext, WOverrides};

    #[test]
    fn all_one_mod_two() {
        let one = build_sieve(&MultiplicativeFunction::all_one(), 100).unwrap();
        let ctx = make_wcontext(100, &WOverrides::default()).unwrap();
        let t = residue_mean_table(&one, 10, 2, &ctx).unwrap();
        assert_eq!(t.means.into_iter().collect::<Vec<_>>(), vec![(1, 1.0)]);
    }

    #[test]
    fn entries_match_filtered_loop() {
        let f = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 10_000).unwrap();
        let ctx = make_wcontext(
            10_000,
            &WOverrides {
                w_of_x: Some(3.0),
                ..Default::default()
            },
        )
        .unwrap();
        let t = residue_mean_table(&f, 10_000, 6, &ctx).unwrap();
        assert_eq!(t.means.keys().copied().collect::<Vec<_>>(), vec![1, 5]);
        for (&a, &v) in &t.means {
            let mut direct = 0.0;
            for n in (1..=10_000u64).filter(|n| n % 6 == a) {
                direct += MultiplicativeFunction::delta_omega(0.5).unwrap().eval(n).unwrap();
            }
            assert!((v - direct * 6.0 / 1e4).abs() < 1e-12);
        }
        // Re-aggregation: sum_A table[A] / modulus is S over n coprime to W.
        let coprime: f64 = (1..=10_000u64)
            .filter(|n| arith::gcd(*n, 6) == 1)
            .map(|n| f.get(n))
            .sum::<f64>()
            / 1e4;
        let back: f64 = t.means.values().sum::<f64>() / 6.0;
        assert!((coprime - back).abs() < 1e-12);
    }

    #[test]
    fn stability_grid_values() {
        let f = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 20_000).unwrap();
        let rep = stability_scan(&f, 20_000, 1.0, 3, 1).unwrap();
        assert!(!rep.rows.is_empty());
        let s_x = mean_value_progression(&f, 20_000, 3, 1).unwrap();
        for row in &rep.rows {
            let direct = mean_value_progression(&f, row.x_prime, 3, 1).unwrap() - s_x;
            assert!((row.raw_delta - direct).abs() < 1e-12);
        }
        assert!(stability_scan(&f, 20_000, 1.0, 3, 3).is_err());
        assert!(stability_scan(&f, 20_000, 1.0, 11, 1).is_err());
    }
}
