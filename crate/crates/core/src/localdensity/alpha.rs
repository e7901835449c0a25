//! Local densities `alpha(p^{c_1}, ..., p^{c_r})`: the proportion of
//! `u in (Z/p^m)^s` with `p^{c_i} | phi_i(u)` for every `i`.
//!
//! Two routes: plain enumeration of the residue box, and elimination over
//! `Z/p^m` (a Smith-form reduction that only ever divides by units).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linsys::LinearSystem;

/// Residue boxes up to this many points may be enumerated.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AlphaMethod {
    /// Eliminate; fall back to nothing (elimination is always cheap).
    #[default]
    Auto,
    Enumerate,
    Eliminate,
}

/// Density `p^{-k}` (as `Some(k)`) or 0 (`None`) of the solutions of
/// `<rows[i], u> + consts[i] = 0 mod p^{exps[i]}`.
pub fn congruence_density_exponent(rows: &[&[i64]], consts: &[i128], p: u64, exps: &[u32]) -> Result<Option<u64>> {
    let s = rows.first().map_or(0, |r| r.len());
    let m = exps.iter().copied().max().unwrap_or(0);
    if m == 0 {
        return Ok(Some(0));
    }
    let modulus = checked_prime_power(p, m)?;
    let reduce = |x: i128| -> u64 { x.rem_euclid(modulus as i128) as u64 };
    let mut mat: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    for ((row, &c), &e) in rows.iter().zip(consts).zip(exps) {
        if e == 0 {
            continue;
        }
        let lift = p.pow(m - e);
        mat.push(
            row.iter()
                .map(|&a| arith::mul_mod(reduce(a as i128), lift, modulus))
                .collect(),
        );
        rhs.push(arith::mul_mod(reduce(-c), lift, modulus));
    }
    let n = mat.len();
    let val = |x: u64| -> u32 {
        if x == 0 {
            m
        } else {
            arith::valuation(x, p).min(m)
        }
    };
    let mut pivots: Vec<u32> = Vec::new();
    let mut k = 0;
    while k < n.min(s) {
        // Entry of least valuation in the trailing block.
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in mat.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                let v = val(x);
                if v < m && best.map_or(true, |b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, e)) = best else { break };
        mat.swap(k, bi);
        rhs.swap(k, bi);
        for row in mat.iter_mut() {
            row.swap(k, bj);
        }
        // Scale row k so the pivot is exactly p^e.
        let pe = p.pow(e);
        let unit = mat[k][k] / pe;
        let inv = arith::inv_mod(unit % modulus, modulus).expect("pivot cofactor is a unit");
        for x in mat[k].iter_mut() {
            *x = arith::mul_mod(*x, inv, modulus);
        }
        rhs[k] = arith::mul_mod(rhs[k], inv, modulus);
        // Clear column k below and row k to the right.
        for i in 0..n {
            if i == k || mat[i][k] == 0 {
                continue;
            }
            let t = mat[i][k] / pe;
            for j in 0..s {
                let sub = arith::mul_mod(t, mat[k][j], modulus);
                mat[i][j] = (mat[i][j] + modulus - sub) % modulus;
            }
            let sub = arith::mul_mod(t, rhs[k], modulus);
            rhs[i] = (rhs[i] + modulus - sub) % modulus;
        }
        for j in k + 1..s {
            if mat[k][j] == 0 {
                continue;
            }
            let t = mat[k][j] / pe;
            for row in mat.iter_mut() {
                let sub = arith::mul_mod(t, row[k], modulus);
                row[j] = (row[j] + modulus - sub) % modulus;
            }
        }
        pivots.push(e);
        k += 1;
    }
    let rank = pivots.len();
    for (i, &e) in pivots.iter().enumerate() {
        if val(rhs[i]) < e {
            return Ok(None);
        }
    }
    if rhs[rank..].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let sum_e: u64 = pivots.iter().map(|&e| e as u64).sum();
    Ok(Some(m as u64 * rank as u64 - sum_e))
}

fn checked_prime_power(p: u64, m: u32) -> Result<u64> {
    p.checked_pow(m)
        .filter(|&v| v < 1u64 << 62)
        .ok_or_else(|| Error::Budget(format!("modulus {p}^{m} exceeds 2^62; use smaller exponents")))
}

fn density_from_exponent(p: u64, k: Option<u64>) -> BigRational {
    match k {
        None => BigRational::zero(),
        Some(k) => BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), k as usize)),
    }
}

fn enumerate_density(rows: &[&[i64]], consts: &[i128], p: u64, exps: &[u32]) -> Result<BigRational> {
    let s = rows.first().map_or(0, |r| r.len());
    let m = exps.iter().copied().max().unwrap_or(0);
    let modulus = checked_prime_power(p, m)?;
    let total = (modulus as u128)
        .checked_pow(s as u32)
        .filter(|&t| t <= ENUMERATION_BUDGET as u128);
    let Some(total) = total else {
        return Err(Error::Budget(format!(
            "enumerating ({p}^{m})^{s} residues exceeds {ENUMERATION_BUDGET}; use smaller exponents"
        )));
    };
    let mods: Vec<i128> = exps.iter().map(|&e| p.pow(e) as i128).collect();
    let mut u = vec![0i128; s];
    let mut hits = 0u64;
    for _ in 0..total {
        let ok = rows.iter().zip(consts).zip(&mods).all(|((row, &c), &q)| {
            let v: i128 = row.iter().zip(&u).map(|(&a, &x)| a as i128 * x).sum::<i128>() + c;
            v.rem_euclid(q) == 0
        });
        hits += ok as u64;
        for x in u.iter_mut() {
            *x += 1;
            if *x < modulus as i128 {
                break;
            }
            *x = 0;
        }
    }
    Ok(BigRational::new(hits.into(), BigInt::from(total)))
}

/// Density of `<rows[i], u> + consts[i] = 0 mod p^{exps[i]}` by the chosen route.
pub fn congruence_density(
    rows: &[&[i64]],
    consts: &[i128],
    p: u64,
    exps: &[u32],
    method: AlphaMethod,
) -> Result<BigRational> {
    if rows.len() != consts.len() || rows.len() != exps.len() {
        return Err(Error::InvalidArgument(
            "rows, constants and exponents differ in length".into(),
        ));
    }
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    match method {
        AlphaMethod::Enumerate => enumerate_density(rows, consts, p, exps),
        AlphaMethod::Auto | AlphaMethod::Eliminate => Ok(density_from_exponent(
            p,
            congruence_density_exponent(rows, consts, p, exps)?,
        )),
    }
}

fn system_parts(sys: &LinearSystem) -> (Vec<&[i64]>, Vec<i128>) {
    let rows = sys.forms().iter().map(|f| f.coeffs()).collect();
    let consts = sys.forms().iter().map(|f| f.constant() as i128).collect();
    (rows, consts)
}

/// `alpha(p^{c_1}, ..., p^{c_r})` for the system.
pub fn alpha_local(sys: &LinearSystem, p: u64, exps: &[u32]) -> Result<BigRational> {
    alpha_local_with(sys, p, exps, AlphaMethod::Auto)
}

pub fn alpha_local_with(sys: &LinearSystem, p: u64, exps: &[u32], method: AlphaMethod) -> Result<BigRational> {
    if exps.len() != sys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} exponents for {} forms",
            exps.len(),
            sys.len()
        )));
    }
    let (rows, consts) = system_parts(sys);
    congruence_density(&rows, &consts, p, exps, method)
}

/// `alpha(d_1, ..., d_r)` for arbitrary moduli, as the product of its local factors.
pub fn alpha_composite(sys: &LinearSystem, moduli: &[u64]) -> Result<BigRational> {
    if moduli.len() != sys.len() || moduli.iter().any(|&d| d == 0) {
        return Err(Error::InvalidArgument("need one positive modulus per form".into()));
    }
    let l = moduli.iter().fold(1u64, |a, &d| arith::lcm(a, d));
    let mut out = BigRational::one();
    for (p, _) in arith::factorize(l) {
        let exps: Vec<u32> = moduli.iter().map(|&d| arith::valuation(d, p)).collect();
        out *= alpha_local(sys, p, &exps)?;
    }
    Ok(out)
}

/// Joint density of `p^{a_j} || phi_j(v)` for all `j`, by inclusion–exclusion
/// over `1_{p^a || x} = 1_{p^a | x} - 1_{p^{a+1} | x}`. This equals the count
/// over `v mod p^{max a + 1}` divided by `p^{(max a + 1) s}`.
pub fn exact_divisibility_density(
    sys: &LinearSystem,
    p: u64,
    a: &[u32],
    cache: &mut HashMap<(u64, Vec<u32>), BigRational>,
) -> Result<BigRational> {
    let r = a.len();
    let mut total = BigRational::zero();
    for mask in 0u32..(1 << r) {
        let exps: Vec<u32> = (0..r).map(|j| a[j] + (mask >> j & 1)).collect();
        let key = (p, exps);
        let d = match cache.get(&key) {
            Some(d) => d.clone(),
            None => {
                let d = alpha_local(sys, p, &key.1)?;
                cache.insert(key, d.clone());
                d
            }
        };
        if mask.count_ones() % 2 == 0 {
            total += d;
        } else {
            total -= d;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::LinearForm;

    fn sys(rows: &[Vec<i64>], consts: &[i64]) -> LinearSystem {
        LinearSystem::from_matrix(rows, consts).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_form_examples() {
        let id = sys(&[vec![1]], &[0]);
        for c in 0..5 {
            assert_eq!(alpha_local(&id, 3, &[c]).unwrap(), q(1, 3i64.pow(c)));
        }
        let odd = LinearSystem::new(1, vec![LinearForm::new(vec![2], 1).unwrap()]).unwrap();
        assert_eq!(alpha_local(&odd, 2, &[0]).unwrap(), q(1, 1));
        for c in 1..4 {
            assert_eq!(alpha_local(&odd, 2, &[c]).unwrap(), q(0, 1));
        }
        assert_eq!(alpha_composite(&id, &[12]).unwrap(), q(1, 12));
        assert_eq!(alpha_composite(&id, &[1]).unwrap(), q(1, 1));
    }

    #[test]
    fn nine_point_oracle() {
        let s = sys(&[vec![1, 0], vec![1, 2]], &[0, 0]);
        let mut hits = 0;
        for a in 0..3 {
            for b in 0..3 {
                hits += (a % 3 == 0 && (a + 2 * b) % 3 == 0) as i64;
            }
        }
        assert_eq!(alpha_local(&s, 3, &[1, 1]).unwrap(), q(hits, 9));
    }

    #[test]
    fn routes_agree_on_mixed_exponents() {
        let s = sys(&[vec![2, 4, 0], vec![0, 3, 9], vec![6, 0, 1]], &[4, -3, 7]);
        for p in [2u64, 3, 5] {
            for e in [[1u32, 2, 0], [2, 2, 2], [3, 1, 2], [0, 3, 1]] {
                let a = alpha_local_with(&s, p, &e, AlphaMethod::Eliminate).unwrap();
                let b = alpha_local_with(&s, p, &e, AlphaMethod::Enumerate).unwrap();
                assert_eq!(a, b, "p = {p}, exps = {e:?}");
            }
        }
    }

    #[test]
    fn budget_and_argument_errors() {
        let id = sys(&[vec![1, 1, 1]], &[0]);
        assert!(matches!(
            alpha_local_with(&id, 101, &[5], AlphaMethod::Enumerate),
            Err(Error::Budget(_))
        ));
        assert!(matches!(alpha_local(&id, 2, &[70]), Err(Error::Budget(_))));
        assert!(alpha_local(&id, 4, &[1]).is_err());
    }

    #[test]
    fn exact_divisibility_partitions_residues() {
        // At modulus p^{A+1}: classes a = 0..A plus "divisible by p^{A+1}" cover everything.
        let s = sys(&[vec![3, 1]], &[2]);
        let mut cache = HashMap::new();
        for p in [2u64, 3, 5] {
            let big_a = 4;
            let mut total = BigRational::zero();
            for a in 0..=big_a {
                total += exact_divisibility_density(&s, p, &[a], &mut cache).unwrap();
            }
            total += alpha_local(&s, p, &[big_a + 1]).unwrap();
            assert_eq!(total, BigRational::one());
        }
    }
}
