//! Correlation sums `sum_{n in Z^s ∩ tK} prod_i f_i(phi_i(n))`.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::multfunc::SieveTable;
use crate::sum::KahanSum;

use super::body::{format_point, ConvexBody, Scale};
use super::form::LinearSystem;

/// Enumeration work is cut into slabs of this many first-coordinate values at
/// most, independent of the thread count, so the reduction order is fixed.
const SLABS: i64 = 256;

/// What to do with lattice points where some form leaves its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RangePolicy {
    /// Check the range over the real body up front and fail on violation.
    #[default]
    Strict,
    /// Skip offending lattice points and count them per form.
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationResult {
    pub scale: Scale,
    pub raw_sum: f64,
    pub lattice_count: u64,
    /// Per form, the number of lattice points skipped because that form left
    /// its table (always zero under [`RangePolicy::Strict`]).
    pub admissibility_failures: Vec<u64>,
    pub runtime_ms: f64,
}

impl CorrelationResult {
    /// `raw_sum / lattice_count`.
    pub fn average(&self) -> f64 {
        if self.lattice_count == 0 {
            0.0
        } else {
            self.raw_sum / self.lattice_count as f64
        }
    }
}

/// Exact range of each form over `scale * K`, as `(min, max)` with the vertex
/// attaining it. `None` for an empty body.
pub fn form_ranges(
    sys: &LinearSystem,
    body: &ConvexBody,
    scale: Scale,
) -> Option<Vec<((BigRational, Vec<BigRational>), (BigRational, Vec<BigRational>))>> {
    let t = scale.to_rational();
    let verts: Vec<Vec<BigRational>> = body
        .vertices()
        .into_iter()
        .map(|v| v.into_iter().map(|x| x * &t).collect())
        .collect();
    if verts.is_empty() {
        return None;
    }
    let out = sys
        .forms()
        .iter()
        .map(|f| {
            let value = |v: &Vec<BigRational>| -> BigRational {
                let mut acc = BigRational::from_integer(f.constant().into());
                for (&a, x) in f.coeffs().iter().zip(v) {
                    acc += BigRational::from_integer(a.into()) * x;
                }
                acc
            };
            let mut lo = (value(&verts[0]), verts[0].clone());
            let mut hi = lo.clone();
            for v in &verts[1..] {
                let x = value(v);
                if x < lo.0 {
                    lo = (x.clone(), v.clone());
                }
                if x > hi.0 {
                    hi = (x, v.clone());
                }
            }
            (lo, hi)
        })
        .collect();
    Some(out)
}

/// Check `phi_i(scale * K) ⊂ [1, highs[i]]`.
pub fn check_form_ranges(sys: &LinearSystem, body: &ConvexBody, scale: Scale, highs: &[u64]) -> Result<()> {
    let Some(ranges) = form_ranges(sys, body, scale) else {
        return Ok(());
    };
    for (i, ((lo, lo_at), (hi, hi_at))) in ranges.into_iter().enumerate() {
        let one = BigRational::from_integer(1.into());
        let top = BigRational::from_integer(highs[i].into());
        let (bad, at) = if lo < one {
            (lo, lo_at)
        } else if hi > top {
            (hi, hi_at)
        } else {
            continue;
        };
        return Err(Error::FormRange {
            form: i,
            value: rational_floor(&bad),
            point: format_point(&at),
            lo: 1,
            hi: highs[i] as i128,
        });
    }
    Ok(())
}

fn rational_floor(q: &BigRational) -> i128 {
    use num_traits::ToPrimitive;
    q.floor()
        .to_integer()
        .to_i128()
        .unwrap_or(if q.is_zero() { 0 } else { i128::MAX })
}

/// Correlation of sieve tables, checked strictly.
pub fn correlation_sum(
    tbls: &[&SieveTable],
    sys: &LinearSystem,
    body: &ConvexBody,
    t: u64,
) -> Result<CorrelationResult> {
    let values: Vec<&[f64]> = tbls.iter().map(|t| t.values()).collect();
    correlation_sum_values(&values, sys, body, Scale::integer(t)?, RangePolicy::Strict)
}

/// `sum_{n in Z^s ∩ (t/W')K} prod_i f_i(W_i phi_i(n) + A_i)` with
/// `W' = lcm(W_i)`. Every `A_i` must be coprime to `coprime_to` (usually `W(t)`).
pub fn correlation_sum_wtricked(
    tbls: &[&SieveTable],
    sys: &LinearSystem,
    body: &ConvexBody,
    t: u64,
    w_list: &[u64],
    a_list: &[i64],
    coprime_to: u64,
) -> Result<CorrelationResult> {
    let values: Vec<&[f64]> = tbls.iter().map(|t| t.values()).collect();
    correlation_sum_wtricked_values(&values, sys, body, t, w_list, a_list, coprime_to, RangePolicy::Strict)
}

/// Scale `t / lcm(W_i)` and the transformed system for the W-tricked sum.
pub fn wtricked_system(
    sys: &LinearSystem,
    t: u64,
    w_list: &[u64],
    a_list: &[i64],
    coprime_to: u64,
) -> Result<(LinearSystem, Scale)> {
    if w_list.iter().any(|&w| w == 0) {
        return Err(Error::InvalidArgument("moduli W_i must be >= 1".into()));
    }
    for (i, &a) in a_list.iter().enumerate() {
        if arith::gcd(a.unsigned_abs(), coprime_to) != 1 {
            return Err(Error::Coprimality(format!(
                "A_{i} = {a} is not coprime to {coprime_to}"
            )));
        }
    }
    let w_prime = w_list.iter().fold(1u64, |acc, &w| arith::lcm(acc, w));
    let tricked = sys.wtricked(w_list, a_list)?;
    Ok((tricked, Scale::new(t as i128, w_prime as i128)?))
}

#[allow(clippy::too_many_arguments)]
pub fn correlation_sum_wtricked_values(
    values: &[&[f64]],
    sys: &LinearSystem,
    body: &ConvexBody,
    t: u64,
    w_list: &[u64],
    a_list: &[i64],
    coprime_to: u64,
    policy: RangePolicy,
) -> Result<CorrelationResult> {
    let (tricked, scale) = wtricked_system(sys, t, w_list, a_list, coprime_to)?;
    correlation_sum_values(values, &tricked, body, scale, policy)
}

/// General entry point: `values[i][n] = f_i(n)` for `1 <= n < values[i].len()`
/// (slot 0 unused). Runs on the current rayon pool.
pub fn correlation_sum_values(
    values: &[&[f64]],
    sys: &LinearSystem,
    body: &ConvexBody,
    scale: Scale,
    policy: RangePolicy,
) -> Result<CorrelationResult> {
    let start = Instant::now();
    let r = sys.len();
    if values.len() != r {
        return Err(Error::InvalidArgument(format!("{r} forms but {} tables", values.len())));
    }
    if sys.dim() != body.dim() {
        return Err(Error::InvalidArgument(format!(
            "system has {} variables, body has dimension {}",
            sys.dim(),
            body.dim()
        )));
    }
    let highs: Vec<u64> = values.iter().map(|v| v.len().saturating_sub(1) as u64).collect();
    if policy == RangePolicy::Strict {
        check_form_ranges(sys, body, scale, &highs)?;
    }
    let Some((x0_lo, x0_hi)) = body.first_coordinate_range(scale) else {
        return Ok(CorrelationResult {
            scale,
            raw_sum: 0.0,
            lattice_count: 0,
            admissibility_failures: vec![0; r],
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    };
    let width = ((x0_hi - x0_lo + 1) + SLABS - 1) / SLABS;
    let slabs: Vec<(i64, i64)> = (0..SLABS)
        .map(|k| (x0_lo + k * width, (x0_lo + (k + 1) * width - 1).min(x0_hi)))
        .filter(|(a, b)| a <= b)
        .collect();
    let partials: Vec<Result<(KahanSum, u64, Vec<u64>)>> = slabs
        .into_par_iter()
        .map(|(a, b)| slab_sum(values, sys, body, scale, policy, a, b))
        .collect();
    let mut total = KahanSum::new();
    let mut count = 0u64;
    let mut fails = vec![0u64; r];
    for p in partials {
        let (s, c, f) = p?;
        total.merge(&s);
        count += c;
        fails.iter_mut().zip(f).for_each(|(x, y)| *x += y);
    }
    Ok(CorrelationResult {
        scale,
        raw_sum: total.value(),
        lattice_count: count,
        admissibility_failures: fails,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn slab_sum(
    values: &[&[f64]],
    sys: &LinearSystem,
    body: &ConvexBody,
    scale: Scale,
    policy: RangePolicy,
    x0_lo: i64,
    x0_hi: i64,
) -> Result<(KahanSum, u64, Vec<u64>)> {
    let r = sys.len();
    let s = sys.dim();
    let steps: Vec<i128> = sys.forms().iter().map(|f| f.coeffs()[s - 1] as i128).collect();
    let mut base = vec![0i128; r];
    let mut point = vec![0i64; s];
    let mut sum = KahanSum::new();
    let mut count = 0u64;
    let mut fails = vec![0u64; r];
    body.for_each_line(scale, x0_lo, x0_hi, |prefix, lo, hi| -> Result<()> {
        point[..s - 1].copy_from_slice(prefix);
        point[s - 1] = 0;
        for (b, f) in base.iter_mut().zip(sys.forms()) {
            *b = f.eval(&point)?;
        }
        count += (hi - lo + 1) as u64;
        'points: for x in lo..=hi {
            let mut prod = 1.0f64;
            for i in 0..r {
                let v = base[i] + steps[i] * x as i128;
                match values[i].get(v as usize).filter(|_| v >= 1 && v <= usize::MAX as i128) {
                    Some(&fv) => prod *= fv,
                    None => match policy {
                        RangePolicy::Skip => {
                            fails[i] += 1;
                            continue 'points;
                        }
                        RangePolicy::Strict => {
                            point[s - 1] = x;
                            return Err(Error::FormRange {
                                form: i,
                                value: v,
                                point: point.iter().map(|c| c.to_string()).collect(),
                                lo: 1,
                                hi: values[i].len() as i128 - 1,
                            });
                        }
                    },
                }
            }
            sum.add(prod);
        }
        Ok(())
    })?;
    Ok((sum, count, fails))
}
