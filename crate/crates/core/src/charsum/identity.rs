//! Twisted sums, the restricted character-sum identity and the major-arc probe.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::multfunc::{euler_envelope, progression_sum, SieveTable};
use crate::sum::{ComplexSum, KahanSum};

use super::group::{Character, CharacterGroup};

/// `sum_{n <= x} f(n) conj(chi(n))`.
pub fn twisted_mean(tbl: &SieveTable, x: u64, group: &CharacterGroup, chi: &Character) -> Result<Complex64> {
    if x > tbl.len() {
        return Err(Error::OutOfRange(format!("x = {x} beyond table length {}", tbl.len())));
    }
    let vals: Vec<Complex64> = group.values(chi).into_iter().map(|z| z.conj()).collect();
    Ok(twisted_with(tbl, x, &vals))
}

fn twisted_with(tbl: &SieveTable, x: u64, conj_vals: &[Complex64]) -> Complex64 {
    let q = conj_vals.len() as u64;
    const CHUNK: u64 = 1 << 16;
    let parts: Vec<ComplexSum> = (0..x.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| {
            let mut s = ComplexSum::new();
            for n in k * CHUNK + 1..=((k + 1) * CHUNK).min(x) {
                let c = conj_vals[(n % q) as usize];
                if c.re != 0.0 || c.im != 0.0 {
                    s.add(c * tbl.get(n));
                }
            }
            s
        })
        .collect();
    let mut total = ComplexSum::new();
    for p in parts {
        total.add(p.value());
    }
    total.value()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub y: u64,
    pub q0: u64,
    pub w_tilde: u64,
    pub a: u64,
    /// `S_f(y; W~, A) - S_f(y; q0 W~, A)` from two progression sums.
    pub lhs: f64,
    /// The same difference from character sums (exact in general).
    pub rhs: f64,
    /// `-(q0 W~ / y) (1/phi(q0 W~)) sum*_chi chi(A) sum_{n <= y} f(n) conj(chi(n))`,
    /// the restricted sum alone.
    pub restricted_term: Complex64,
    /// `rhs - restricted_term`; zero when every prime of `q0` divides `W~`.
    pub correction: f64,
    /// Every prime factor of `q0` divides `W~`.
    pub compatible: bool,
    pub residual: f64,
    /// `(W~/y) sum_{n <= y} |f(n)|` restricted to `n = A mod W~`, the trivial bound.
    pub scale: f64,
    pub restricted_count: usize,
}

/// Both sides of the restricted character-sum identity at the same cutoff `y`.
///
/// With `R = sum_{n <= y, n = A (W~), gcd(n, q0) > 1} f(n)` and
/// `T(chi) = sum_{n <= y} f(n) conj(chi(n))` for characters mod `q0 W~`,
///
/// `S(y; W~, A) - S(y; q0 W~, A) = (W~/y) [ R + (1/phi(W~)) sum_{chi induced} chi(A) T(chi)
///                                           - (q0/phi(q0 W~)) sum_chi chi(A) T(chi) ]`,
///
/// which reduces to the restricted sum with a minus sign when `phi(q0 W~) = q0 phi(W~)`.
pub fn restricted_identity_check(tbl: &SieveTable, y: u64, q0: u64, w_tilde: u64, a: u64) -> Result<IdentityCheck> {
    if q0 == 0 || w_tilde == 0 {
        return Err(Error::InvalidArgument("q0 and W~ must be >= 1".into()));
    }
    let q = q0 * w_tilde;
    if arith::gcd(a % q, q) != 1 {
        return Err(Error::Coprimality(format!(
            "need gcd(A, q0 W~) = 1, got A = {a}, q0 W~ = {q}"
        )));
    }
    if y == 0 || y > tbl.len() {
        return Err(Error::OutOfRange(format!("y = {y} outside 1..={}", tbl.len())));
    }
    let yf = y as f64;
    let lhs = w_tilde as f64 / yf
        * (progression_sum(tbl, y, w_tilde, a as i64)? - q0 as f64 * progression_sum(tbl, y, q, a as i64)?);

    let group = CharacterGroup::new(q)?;
    let (induced, restricted) = group.partition_by_induced(w_tilde)?;
    let weighted = |chars: &[Character]| -> Complex64 {
        let mut s = ComplexSum::new();
        for chi in chars {
            let conj: Vec<Complex64> = group.values(chi).into_iter().map(|z| z.conj()).collect();
            s.add(group.eval(chi, a) * twisted_with(tbl, y, &conj));
        }
        s.value()
    };
    let sum_induced = weighted(&induced);
    let sum_restricted = weighted(&restricted);
    let r: KahanSum = (0..)
        .map(|k| a % w_tilde + k * w_tilde)
        .skip_while(|&n| n == 0)
        .take_while(|&n| n <= y)
        .filter(|&n| arith::gcd(n, q0) > 1)
        .map(|n| tbl.get(n))
        .collect();
    let phi_w = arith::euler_phi(w_tilde) as f64;
    let phi_q = arith::euler_phi(q) as f64;
    let all = sum_induced + sum_restricted;
    let rhs_c = (r.value() + sum_induced / phi_w - all * (q0 as f64 / phi_q)) * (w_tilde as f64 / yf);
    let restricted_term = -sum_restricted * (q as f64 / yf / phi_q);
    let scale_sum: KahanSum = (1..=y)
        .filter(|n| n % w_tilde == a % w_tilde)
        .map(|n| tbl.get(n).abs())
        .collect();
    let compatible = arith::factorize(q0).iter().all(|&(p, _)| w_tilde % p == 0);
    Ok(IdentityCheck {
        y,
        q0,
        w_tilde,
        a: a % q,
        lhs,
        rhs: rhs_c.re,
        restricted_term,
        correction: rhs_c.re - restricted_term.re,
        compatible,
        residual: (lhs - rhs_c.re).abs().max(rhs_c.im.abs()),
        scale: scale_sum.value() * w_tilde as f64 / yf,
        restricted_count: restricted.len(),
    })
}

/// `max_{chi not induced} |sum_{A' = A (W~)} chi(A')|` and
/// `max_{chi induced} |sum_{A' = A (W~)} chi(A') - q0 chi(A)|` over units `A'`
/// mod `q0 W~`.
pub fn bracket_coefficients(q0: u64, w_tilde: u64, a: u64) -> Result<(f64, f64)> {
    let q = q0 * w_tilde;
    let group = CharacterGroup::new(q)?;
    let (induced, restricted) = group.partition_by_induced(w_tilde)?;
    let lifts: Vec<u64> = (0..q)
        .filter(|&n| n % w_tilde == a % w_tilde && arith::gcd(n, q) == 1)
        .collect();
    let bracket = |chi: &Character| -> Complex64 { lifts.iter().map(|&n| group.eval(chi, n)).sum() };
    let r = restricted.iter().map(|c| bracket(c).norm()).fold(0.0, f64::max);
    let i = induced
        .iter()
        .map(|c| (bracket(c) - group.eval(c, a) * q0 as f64).norm())
        .fold(0.0, f64::max);
    Ok((r, i))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MajorArcReport {
    pub x: u64,
    pub q0: u64,
    pub w_tilde: u64,
    pub a: u64,
    pub theta: f64,
    pub interval_len: u64,
    pub envelope: f64,
    /// Largest `|deviation| / envelope` over the interval grid.
    pub normalized_deviation: f64,
    pub intervals: usize,
}

/// Intervals on the probe grid.
pub const MAJOR_ARC_GRID: u64 = 64;

/// Interval means of `f` along `A mod q0 W~` at the threshold length
/// `x (log x)^{-theta}`, against `S_f(x; W~, A)`, normalised by
/// `(1/log x) (q/phi(q)) prod_{p < x, p ∤ q} (1 + |f(p)|/p)` with `q = q0 W~`.
pub fn major_arc_probe(tbl: &SieveTable, x: u64, q0: u64, w_tilde: u64, a: u64, theta: f64) -> Result<MajorArcReport> {
    if x < 3 || x > tbl.len() {
        return Err(Error::OutOfRange(format!("x = {x} outside 3..={}", tbl.len())));
    }
    let q = q0 * w_tilde;
    if q0 == 0 || w_tilde == 0 || arith::gcd(a % q, q) != 1 {
        return Err(Error::Coprimality(format!(
            "need gcd(A, q0 W~) = 1, got A = {a}, q0 W~ = {q}"
        )));
    }
    let log_x = (x as f64).ln();
    if q0 as f64 > log_x.powf(theta) {
        return Err(Error::OutOfRange(format!(
            "q0 = {q0} exceeds (log x)^theta = {:.3}",
            log_x.powf(theta)
        )));
    }
    let len = ((x as f64) / log_x.powf(theta)).ceil() as u64 + 1;
    if len > x {
        return Err(Error::OutOfRange(format!("interval length {len} exceeds x = {x}")));
    }
    let s_x = w_tilde as f64 / x as f64 * progression_sum(tbl, x, w_tilde, a as i64)?;
    let envelope = q as f64 / arith::euler_phi(q) as f64 / log_x * euler_envelope(tbl, x - 1, q, false)?;
    // Prefix sums along the progression, indexed by n.
    let r = a % q;
    let mut prefix = vec![0.0f64; x as usize + 1];
    let mut acc = KahanSum::new();
    for n in 1..=x {
        if n % q == r {
            acc.add(tbl.get(n));
        }
        prefix[n as usize] = acc.value();
    }
    let starts: Vec<u64> = (0..MAJOR_ARC_GRID)
        .map(|k| k * (x - len) / (MAJOR_ARC_GRID - 1))
        .collect();
    let mut worst = 0.0f64;
    for &y1 in &starts {
        let sum = prefix[(y1 + len) as usize] - prefix[y1 as usize];
        let dev = q as f64 / len as f64 * sum - s_x;
        worst = worst.max(dev.abs() / envelope);
    }
    Ok(MajorArcReport {
        x,
        q0,
        w_tilde,
        a: r,
        theta,
        interval_len: len,
        envelope,
        normalized_deviation: worst,
        intervals: starts.len(),
    })
}
