//! Domination, exceptional-set density, average order and the linear forms ratio.

use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::linsys::{correlation_sum_values, ConvexBody, LinearSystem, RangePolicy, Scale};
use crate::sum::KahanSum;

use super::nu::Majorant;

#[derive(Clone, Debug, PartialEq)]
pub struct DominationReport {
    pub t: u64,
    /// `max_{n <= T, n ∉ S} |h(n)| / (nu♯ nu♭)(n)`; infinite if some `n`
    /// has `|h(n)| > 0 = nu(n)`.
    pub max_ratio: f64,
    pub argmax: u64,
    pub exceptional: u64,
    pub uncovered: u64,
}

pub fn domination_scan(m: &Majorant) -> Result<DominationReport> {
    const CHUNK: u64 = 4096;
    let chunks: Vec<(u64, u64)> = (0..m.t.div_ceil(CHUNK))
        .map(|k| (k * CHUNK + 1, ((k + 1) * CHUNK).min(m.t)))
        .collect();
    let parts: Vec<Result<(f64, u64, u64, u64)>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let (mut best, mut arg, mut exc, mut unc) = (0.0f64, 0u64, 0u64, 0u64);
            for n in lo..=hi {
                let v = m.evaluate(n)?;
                if v.in_s {
                    exc += 1;
                    continue;
                }
                if v.h_abs == 0.0 {
                    continue;
                }
                let nu = v.nu_sharp * v.nu_flat;
                let r = if nu > 0.0 {
                    v.h_abs / nu
                } else {
                    unc += 1;
                    f64::INFINITY
                };
                if r > best {
                    best = r;
                    arg = n;
                }
            }
            Ok((best, arg, exc, unc))
        })
        .collect();
    let mut rep = DominationReport {
        t: m.t,
        max_ratio: 0.0,
        argmax: 0,
        exceptional: 0,
        uncovered: 0,
    };
    for part in parts {
        let (best, arg, exc, unc) = part?;
        if best > rep.max_ratio {
            rep.max_ratio = best;
            rep.argmax = arg;
        }
        rep.exceptional += exc;
        rep.uncovered += unc;
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalSetDensity {
    pub t: u64,
    pub c1: f64,
    pub count: u64,
    pub density: f64,
    /// `(log T)^{-C1/2}`.
    pub unit_envelope: f64,
}

pub fn exceptional_set_density(m: &Majorant) -> ExceptionalSetDensity {
    let count = (1..=m.t)
        .into_par_iter()
        .filter(|&n| super::nu::in_exceptional_set(&m.spf().factorize(n), m.t, &m.params))
        .count() as u64;
    ExceptionalSetDensity {
        t: m.t,
        c1: m.params.c1,
        count,
        density: count as f64 / m.t as f64,
        unit_envelope: (m.t as f64).ln().powf(-m.params.c1 / 2.0),
    }
}

/// Smallest `kappa'` with `density <= kappa' (log T)^{-C1/2}` at every point.
pub fn fit_envelope_constant(points: &[ExceptionalSetDensity]) -> f64 {
    points.iter().map(|p| p.density / p.unit_envelope).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageOrderReport {
    pub t: u64,
    pub w_tilde: u64,
    pub a: u64,
    /// `S_h(T; W~, A)`.
    pub s_h: f64,
    /// `S_nu(T; W~, A)` with `nu = nu♯ nu♭`.
    pub s_nu: f64,
    /// `(log w(T) / log T) prod_{w(T) < p < T} (1 + |h(p)|/p)`.
    pub envelope: f64,
    /// `|S_h| / S_nu`.
    pub lower_ratio: f64,
    /// `S_nu / envelope`.
    pub upper_ratio: f64,
}

pub fn majorant_average_order(m: &Majorant, w_of_t: f64, w_tilde: u64, a: u64) -> Result<AverageOrderReport> {
    if w_tilde == 0 || arith::gcd(a % w_tilde, w_tilde) != 1 {
        return Err(Error::Coprimality(format!(
            "need gcd(A, W~) = 1, got A = {a}, W~ = {w_tilde}"
        )));
    }
    if !(w_of_t > 1.0) {
        return Err(Error::InvalidArgument(format!("w(T) must exceed 1, got {w_of_t}")));
    }
    let t = m.t;
    let r = a % w_tilde;
    let start = if r == 0 { w_tilde } else { r };
    let points: Vec<u64> = (start..=t).step_by(w_tilde as usize).collect();
    let parts: Vec<Result<(KahanSum, KahanSum)>> = points
        .par_chunks(4096)
        .map(|chunk| {
            let (mut sh, mut sn) = (KahanSum::new(), KahanSum::new());
            for &n in chunk {
                let v = m.evaluate(n)?;
                sh.add(m.h_signed(n));
                sn.add(v.nu_sharp * v.nu_flat);
            }
            Ok((sh, sn))
        })
        .collect();
    let (mut sh, mut sn) = (KahanSum::new(), KahanSum::new());
    for part in parts {
        let (a, b) = part?;
        sh.merge(&a);
        sn.merge(&b);
    }
    let scale = w_tilde as f64 / t as f64;
    let s_h = sh.value() * scale;
    let s_nu = sn.value() * scale;
    let mut log_prod = 0.0;
    for p in m.spf().primes_up_to(t - 1) {
        if p as f64 > w_of_t {
            log_prod += (m.h_abs(p) / p as f64).ln_1p();
        }
    }
    let envelope = w_of_t.ln() / (t as f64).ln() * log_prod.exp();
    Ok(AverageOrderReport {
        t,
        w_tilde,
        a: r,
        s_h,
        s_nu,
        envelope,
        lower_ratio: s_h.abs() / s_nu,
        upper_ratio: s_nu / envelope,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormsRatio {
    pub t: u64,
    pub joint: f64,
    pub marginals: Vec<f64>,
    pub ratio: f64,
    pub lattice_count: u64,
}

/// Joint average of `prod nu_i(W_i phi_i(n) + A_i)` over the lattice points
/// of `T·K`, divided by the product of the marginals
/// `(1/T) sum_{n <= T} nu_i(W_i n + A_i)`. Each `nu[i]` is a value table in
/// the layout of `SieveTable::values` covering `W_i T + A_i`.
pub fn linear_forms_ratio(
    nu: &[&[f64]],
    sys: &LinearSystem,
    body: &ConvexBody,
    t: u64,
    w_list: &[u64],
    a_list: &[i64],
) -> Result<LinearFormsRatio> {
    let tricked = sys.wtricked(w_list, a_list)?;
    let res = correlation_sum_values(nu, &tricked, body, Scale::integer(t)?, RangePolicy::Strict)?;
    let mut marginals = Vec::with_capacity(nu.len());
    for (i, vals) in nu.iter().enumerate() {
        let (w, a) = (w_list[i] as i128, a_list[i] as i128);
        let top = w * t as i128 + a;
        if a + w < 1 || top >= vals.len() as i128 {
            return Err(Error::OutOfRange(format!(
                "marginal {i} needs nu on [{}, {top}], table covers 1..={}",
                w + a,
                vals.len() as i128 - 1
            )));
        }
        let s: KahanSum = (1..=t as i128).map(|n| vals[(w * n + a) as usize]).collect();
        marginals.push(s.value() / t as f64);
    }
    let joint = res.average();
    let prod: f64 = marginals.iter().product();
    Ok(LinearFormsRatio {
        t,
        joint,
        ratio: joint / prod,
        marginals,
        lattice_count: res.lattice_count,
    })
}
