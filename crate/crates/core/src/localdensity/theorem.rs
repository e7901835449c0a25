//! The main term of the W-tricked asymptotic: a finite double sum over
//! `w(T)`-smooth tuples `(w_1, ..., w_r)` and unit residues `A_i mod W~`.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::linsys::{ConvexBody, LinearSystem, Scale};
use crate::multfunc::{mean_value_progression, MultiplicativeFunction, SieveTable};
use crate::sum::KahanSum;
use crate::wtrick::WContext;

use super::alpha::congruence_density_exponent;

/// Upper limit on `(w, A)` terms in one evaluation.
pub const TERM_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremPrediction {
    /// `lattice_count * double_sum`, comparable with the raw correlation sum.
    pub value: f64,
    pub double_sum: f64,
    pub lattice_count: u64,
    /// Number of smooth tuples with non-zero weight.
    pub tuples: u64,
    pub w_tilde: u64,
    pub smooth_bound: u64,
}

/// Density of `v mod w W~` with `phi_j(v) = w_j A_j mod w_j W~` for all `j`,
/// assembled prime by prime.
pub fn residue_system_density(
    sys: &LinearSystem,
    ws: &[(u64, &Factorization)],
    a_list: &[u64],
    w_tilde: u64,
    cache: &mut HashMap<(u64, Vec<u32>, Vec<i128>), Option<u64>>,
) -> Result<f64> {
    let rows: Vec<&[i64]> = sys.forms().iter().map(|f| f.coeffs()).collect();
    let wt_fac = arith::factorize(w_tilde);
    let mut primes: Vec<u64> = wt_fac.iter().map(|e| e.0).collect();
    for (_, fac) in ws {
        primes.extend(fac.iter().map(|e| e.0));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut density = 1.0;
    for p in primes {
        let vt = arith::valuation(w_tilde, p);
        let exps: Vec<u32> = ws
            .iter()
            .map(|(_, fac)| fac.iter().find(|e| e.0 == p).map_or(0, |e| e.1) + vt)
            .collect();
        let consts: Vec<i128> = sys
            .forms()
            .iter()
            .zip(ws)
            .zip(a_list)
            .zip(&exps)
            .map(|(((f, (w, _)), &a), &e)| {
                let m = p.pow(e) as i128;
                (f.constant() as i128 - *w as i128 * a as i128).rem_euclid(m)
            })
            .collect();
        let key = (p, exps, consts);
        let k = match cache.get(&key) {
            Some(&k) => k,
            None => {
                let k = congruence_density_exponent(&rows, &key.2, p, &key.1)?;
                cache.insert(key, k);
                k
            }
        };
        match k {
            None => return Ok(0.0),
            Some(k) => density *= (p as f64).powi(-(k as i32)),
        }
    }
    Ok(density)
}

/// Evaluate the finite main term with smooth parts `w_i <= (log T)^{B2}`
/// (`B2` from the context) and `A_i` over the units mod `W~`.
pub fn predict_main_term_theorem(
    sys: &LinearSystem,
    fs: &[MultiplicativeFunction],
    tbls: &[&SieveTable],
    body: &ConvexBody,
    wctx: &WContext,
    t: u64,
) -> Result<TheoremPrediction> {
    let r = sys.len();
    if r == 0 || fs.len() != r || tbls.len() != r {
        return Err(Error::InvalidArgument(format!(
            "need one function and one table per form ({r} forms)"
        )));
    }
    let w_tilde = wctx.w_tilde;
    let bound_f = wctx.smooth_bound().floor();
    let smooth_bound = if bound_f >= u64::MAX as f64 {
        u64::MAX
    } else {
        bound_f as u64
    };
    let smooth = arith::smooth_numbers(&wctx.small_primes(), smooth_bound);
    let units: Vec<u64> = (0..w_tilde).filter(|&a| arith::gcd(a, w_tilde) == 1).collect();

    // Per form: the smooth w with h(w) != 0, and S_h(T; W~, A) per unit A.
    let mut supports: Vec<Vec<(u64, &Factorization, f64)>> = Vec::with_capacity(r);
    let mut means: Vec<Vec<f64>> = Vec::with_capacity(r);
    for (f, tbl) in fs.iter().zip(tbls) {
        let mut sup = Vec::new();
        for (w, fac) in &smooth {
            let hw = f.eval_factored(fac)?;
            if hw != 0.0 {
                sup.push((*w, fac, hw));
            }
        }
        supports.push(sup);
        means.push(
            units
                .iter()
                .map(|&a| mean_value_progression(tbl, t, w_tilde, a as i64))
                .collect::<Result<_>>()?,
        );
    }
    let tuples: u64 = supports.iter().map(|s| s.len() as u64).product();
    let terms = tuples.saturating_mul((units.len() as u64).saturating_pow(r as u32));
    if terms > TERM_BUDGET {
        return Err(Error::Budget(format!(
            "{terms} (w, A) terms with W~ = {w_tilde} and smooth bound {smooth_bound}; reduce B2 or w(x)"
        )));
    }

    let mut cache = HashMap::new();
    let mut total = KahanSum::new();
    let mut idx = vec![0usize; r];
    let mut a_idx = vec![0usize; r];
    if supports.iter().all(|s| !s.is_empty()) {
        loop {
            let ws: Vec<(u64, &Factorization)> =
                (0..r).map(|i| (supports[i][idx[i]].0, supports[i][idx[i]].1)).collect();
            let weight: f64 = (0..r).map(|i| supports[i][idx[i]].2).product();
            a_idx.iter_mut().for_each(|x| *x = 0);
            loop {
                let a_list: Vec<u64> = a_idx.iter().map(|&k| units[k]).collect();
                let coeff: f64 = (0..r).map(|i| means[i][a_idx[i]]).product();
                if coeff != 0.0 {
                    let d = residue_system_density(sys, &ws, &a_list, w_tilde, &mut cache)?;
                    total.add(weight * coeff * d);
                }
                if !odometer(&mut a_idx, units.len()) {
                    break;
                }
            }
            if !odometer_multi(&mut idx, &supports) {
                break;
            }
        }
    }
    let lattice_count = body.lattice_count(Scale::integer(t)?);
    let double_sum = total.value();
    Ok(TheoremPrediction {
        value: lattice_count.to_f64().unwrap_or(f64::NAN) * double_sum,
        double_sum,
        lattice_count,
        tuples,
        w_tilde,
        smooth_bound,
    })
}

fn odometer(idx: &mut [usize], base: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

fn odometer_multi<T>(idx: &mut [usize], lists: &[Vec<T>]) -> bool {
    for (x, l) in idx.iter_mut().zip(lists) {
        *x += 1;
        if *x < l.len() {
            return true;
        }
        *x = 0;
    }
    false
}
