//! The square-divisor exceptional set `S'_C` and the smooth-truncation check.

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::multfunc::SpfTable;

/// Largest `d` with `d^2 | n`, from a factorisation.
pub fn square_root_part(fac: &[(u64, u32)]) -> u64 {
    arith::squarefree_decomposition(fac).1
}

/// Whether some `d > (log T)^C` has `d^2 | n`.
pub fn exceptional_prime_square(n: u64, t: u64, c: f64) -> bool {
    in_exceptional_square_set(&arith::factorize(n), t, c)
}

pub fn in_exceptional_square_set(fac: &[(u64, u32)], t: u64, c: f64) -> bool {
    square_root_part(fac) as f64 > (t as f64).ln().powf(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalDensity {
    pub t: u64,
    pub c: f64,
    pub count: u64,
    pub density: f64,
    /// `sum_{d > (log T)^C} 1/d^2`.
    pub zeta_tail: f64,
    /// `(1/T) sum_{(log T)^C < d <= sqrt T} floor(T/d^2)`, the union bound.
    pub union_bound: f64,
}

/// `sum_{d > D} 1/d^2`: explicit terms up to a cutoff plus the
/// Euler–Maclaurin tail `sum_{d >= N} 1/d^2 ≈ 1/N + 1/(2N^2) + 1/(6N^3)`.
pub fn zeta_two_tail(d_bound: f64) -> f64 {
    let start = d_bound.floor() as u64 + 1;
    let n_cut = start.max(1_000_000);
    let mut s = 0.0;
    for d in (start..n_cut).rev() {
        let x = d as f64;
        s += 1.0 / (x * x);
    }
    let n = n_cut as f64;
    s + 1.0 / n + 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n)
}

/// Exact scan of `S'_C ∩ [1, T]`.
pub fn exceptional_square_density(spf: &SpfTable, t: u64, c: f64) -> Result<ExceptionalDensity> {
    if t > spf.limit() {
        return Err(Error::OutOfRange(format!(
            "prime table covers {} < T = {t}",
            spf.limit()
        )));
    }
    let bound = (t as f64).ln().powf(c);
    let count = (1..=t)
        .filter(|&n| square_root_part(&spf.factorize(n)) as f64 > bound)
        .count() as u64;
    let first = bound.floor() as u64 + 1;
    let mut union = 0u64;
    let mut d = first;
    while d.saturating_mul(d) <= t {
        union += t / (d * d);
        d += 1;
    }
    Ok(ExceptionalDensity {
        t,
        c,
        count,
        density: count as f64 / t as f64,
        zeta_tail: zeta_two_tail(bound),
        union_bound: union as f64 / t as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruncationCheck {
    /// `w <= (log T)^{3C}`: the lemma says nothing.
    NotApplicable,
    /// `w = w1 * w2^2`, `w1` squarefree, with `w2^2 > (log T)^{2C}`.
    Witness { w1: u64, w2: u64 },
    /// The hypothesis holds but the square part is too small (possible when
    /// `T` is not large enough for the lemma).
    Failure { w1: u64, w2: u64 },
}

/// For `w(T)`-smooth `w > (log T)^{3C}`, exhibit a square divisor
/// `w2^2 > (log T)^{2C}`.
pub fn smooth_truncation_check(w: u64, t: u64, c: f64, w_of_t: f64) -> Result<TruncationCheck> {
    if !(c > 1.0) {
        return Err(Error::InvalidArgument(format!("C must exceed 1, got {c}")));
    }
    if w == 0 {
        return Err(Error::InvalidArgument("w must be positive".into()));
    }
    let fac: Factorization = arith::factorize(w);
    if let Some(&(p, _)) = fac.iter().find(|&&(p, _)| p as f64 > w_of_t * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "w = {w} has prime factor {p} > w(T) = {w_of_t}"
        )));
    }
    let log_t = (t as f64).ln();
    if (w as f64) <= log_t.powf(3.0 * c) {
        return Ok(TruncationCheck::NotApplicable);
    }
    let (w1, w2) = arith::squarefree_decomposition(&fac);
    if (w2 as f64).powi(2) > log_t.powf(2.0 * c) {
        Ok(TruncationCheck::Witness { w1, w2 })
    } else {
        Ok(TruncationCheck::Failure { w1, w2 })
    }
}
