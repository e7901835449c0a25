//! `beta_p`, `beta_infinity` and the corollary-style prediction.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::linsys::{ConvexBody, LinearSystem, Scale};
use crate::multfunc::{MultiplicativeFunction, SieveTable};
use crate::sum::KahanSum;

use super::alpha::exact_divisibility_density;

/// Exponents are capped so that `p^{A+1}` stays below this.
const MODULUS_CAP: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq)]
pub struct BetaP {
    pub p: u64,
    pub value: f64,
    /// Exponent cutoff actually used (may be below the request for large `p`).
    pub a_max: u32,
    /// Bound on the discarded terms; infinite when `H^r >= p`.
    pub tail_bound: f64,
}

impl BetaP {
    /// `|beta_p - 1| p^2`.
    pub fn envelope(&self) -> f64 {
        (self.value - 1.0).abs() * (self.p as f64).powi(2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalDensityReport {
    pub entries: Vec<BetaP>,
    pub p_max: u64,
    pub beta_infinity: f64,
    /// `prod_{p <= P_max} beta_p`.
    pub product: f64,
    /// `beta_infinity * product`.
    pub prediction: f64,
    /// Sum of the per-prime tail bounds relative to each `beta_p`.
    pub relative_tail: f64,
}

impl LocalDensityReport {
    pub fn max_envelope(&self) -> f64 {
        self.entries.iter().map(BetaP::envelope).fold(0.0, f64::max)
    }
}

fn check_inputs(sys: &LinearSystem, fs: &[MultiplicativeFunction], a_max: u32) -> Result<()> {
    if fs.len() != sys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} functions for {} forms",
            fs.len(),
            sys.len()
        )));
    }
    if let Some(f) = fs.iter().find(|f| !f.is_nonnegative()) {
        return Err(Error::InvalidArgument(format!("{} is not non-negative", f.name())));
    }
    if a_max < 1 {
        return Err(Error::InvalidArgument("A_max must be >= 1".into()));
    }
    Ok(())
}

/// Largest `A <= requested` with `p^{A+1} < 2^62`.
pub fn effective_a_max(p: u64, requested: u32) -> u32 {
    let mut a = requested;
    while a > 0 && p.checked_pow(a + 1).map_or(true, |v| v >= MODULUS_CAP) {
        a -= 1;
    }
    a
}

/// Calls `f(a, density)` for every `a in [0, A]^r` with non-zero joint density.
fn for_each_exponent_tuple(
    sys: &LinearSystem,
    p: u64,
    a_max: u32,
    mut f: impl FnMut(&[u32], &BigRational) -> Result<()>,
) -> Result<()> {
    let r = sys.len();
    let mut cache = HashMap::new();
    let mut a = vec![0u32; r];
    loop {
        let d = exact_divisibility_density(sys, p, &a, &mut cache)?;
        if !d.is_zero() {
            f(&a, &d)?;
        }
        let mut j = 0;
        loop {
            if j == r {
                return Ok(());
            }
            if a[j] < a_max {
                a[j] += 1;
                break;
            }
            a[j] = 0;
            j += 1;
        }
    }
}

/// `sum_{M > A} r (M+1)^{r-1} (H^r/p)^M p^G`: every term with `max a = M`
/// has `prod h_j(p^{a_j}) <= H^{rM}`, the joint density is at most
/// `p^{-(M - G)}` where `p^G` is the largest power of `p` dividing the content
/// of some form, and at most `r (M+1)^{r-1}` tuples have maximum `M`.
pub fn beta_tail_bound(sys: &LinearSystem, fs: &[MultiplicativeFunction], p: u64, a_max: u32) -> f64 {
    let r = sys.len() as i32;
    if r == 0 {
        return 0.0;
    }
    let h = fs.iter().map(|f| f.growth()).fold(1.0, f64::max);
    let ratio = h.powi(r) / p as f64;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let g = sys
        .forms()
        .iter()
        .map(|f| {
            let content = f
                .coeffs()
                .iter()
                .fold(0u64, |acc, &c| arith::gcd(acc, c.unsigned_abs()));
            arith::valuation(content, p)
        })
        .max()
        .unwrap_or(0);
    let term = |m: u32| r as f64 * (m as f64 + 1.0).powi(r - 1) * ratio.powi(m as i32);
    let mut s = KahanSum::new();
    let mut m = a_max + 1;
    loop {
        let t = term(m);
        s.add(t);
        let rho = ratio * ((m as f64 + 2.0) / (m as f64 + 1.0)).powi(r - 1);
        if rho < 1.0 && t * rho / (1.0 - rho) < 1e-18 * s.value().max(1e-300) {
            s.add(t * rho / (1.0 - rho));
            break;
        }
        if m > a_max + 100_000 {
            return f64::INFINITY;
        }
        m += 1;
    }
    s.value() * (p as f64).powi(g as i32)
}

/// Truncated `beta_p = sum_{a in [0,A]^r} prod_j h_j(p^{a_j}) delta(a) prod_j (1 + h_j(p)/p)^{-1}`,
/// with `delta(a)` the joint exact-divisibility density.
pub fn beta_p(sys: &LinearSystem, fs: &[MultiplicativeFunction], p: u64, a_max: u32) -> Result<BetaP> {
    check_inputs(sys, fs, a_max)?;
    let a_eff = effective_a_max(p, a_max);
    let mut norm = 1.0;
    for f in fs {
        norm /= 1.0 + f.prime_power(p, 1)? / p as f64;
    }
    let mut s = KahanSum::new();
    for_each_exponent_tuple(sys, p, a_eff, |a, d| {
        let mut w = 1.0;
        for (f, &k) in fs.iter().zip(a) {
            w *= f.prime_power(p, k)?;
        }
        s.add(w * d.to_f64().unwrap_or(0.0));
        Ok(())
    })?;
    Ok(BetaP {
        p,
        value: s.value() * norm,
        a_max: a_eff,
        tail_bound: beta_tail_bound(sys, fs, p, a_eff) * norm,
    })
}

/// The same truncated sum in exact rational arithmetic, reading every value
/// `h(p^k)` as the exact rational its `f64` represents.
pub fn beta_p_exact(sys: &LinearSystem, fs: &[MultiplicativeFunction], p: u64, a_max: u32) -> Result<BigRational> {
    check_inputs(sys, fs, a_max)?;
    let exact =
        |x: f64| BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")));
    let pq = BigRational::from_integer(p.into());
    let mut norm = BigRational::one();
    for f in fs {
        norm /= BigRational::one() + exact(f.prime_power(p, 1)?)? / &pq;
    }
    let mut total = BigRational::zero();
    for_each_exponent_tuple(sys, p, effective_a_max(p, a_max), |a, d| {
        let mut w = d.clone();
        for (f, &k) in fs.iter().zip(a) {
            w *= exact(f.prime_power(p, k)?)?;
        }
        total += w;
        Ok(())
    })?;
    Ok(total * norm)
}

/// `#(Z^s ∩ TK) (log T)^{-r} prod_j prod_{p <= T} (1 + f_j(p)/p)`.
pub fn beta_infinity(tbls: &[&SieveTable], body: &ConvexBody, t: u64) -> Result<f64> {
    let count = body.lattice_count(Scale::integer(t)?);
    let mut log_prod = KahanSum::new();
    for tbl in tbls {
        if tbl.len() < t {
            return Err(Error::OutOfRange(format!(
                "table {} covers {} < T = {t}",
                tbl.name(),
                tbl.len()
            )));
        }
        for p in tbl.spf_table().primes_up_to(t) {
            log_prod.add((tbl.get(p) / p as f64).ln_1p());
        }
    }
    let r = tbls.len() as f64;
    Ok(count as f64 * ((log_prod.value() - r * (t as f64).ln().ln()).exp()))
}

/// `beta_p` for every prime `p <= p_max`, in increasing order of `p`.
pub fn beta_scan(sys: &LinearSystem, fs: &[MultiplicativeFunction], p_max: u64, a_max: u32) -> Result<Vec<BetaP>> {
    check_inputs(sys, fs, a_max)?;
    arith::primes_up_to(p_max)
        .into_par_iter()
        .map(|p| beta_p(sys, fs, p, a_max))
        .collect()
}

/// `beta_infinity * prod_{p <= min(T, P_max)} beta_p`.
pub fn predict_main_term_corollary(
    sys: &LinearSystem,
    fs: &[MultiplicativeFunction],
    tbls: &[&SieveTable],
    body: &ConvexBody,
    t: u64,
    a_max: u32,
    p_max: u64,
) -> Result<LocalDensityReport> {
    let p_max = p_max.min(t);
    let entries = beta_scan(sys, fs, p_max, a_max)?;
    let beta_inf = beta_infinity(tbls, body, t)?;
    let product: f64 = entries.iter().map(|b| b.value.ln()).collect::<KahanSum>().value().exp();
    let relative_tail = entries.iter().map(|b| b.tail_bound / b.value).sum();
    Ok(LocalDensityReport {
        entries,
        p_max,
        beta_infinity: beta_inf,
        product,
        prediction: beta_inf * product,
        relative_tail,
    })
}
