//! Divisor-sum building blocks: the truncated convolution `h_gamma^{(T)}`,
//! the Erdős divisor and the restricted sieve weight `sigma♭`.

use smallvec::SmallVec;

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::multfunc::SieveTable;

use super::cutoff::SmoothCutoff;

pub(crate) type Exps = SmallVec<[u32; 12]>;

/// Calls `f(d, log d, exps)` for every `d = prod p_i^{e_i}` with
/// `e_i <= max_exp[i]` and `log d < max_log`.
pub(crate) fn for_each_divisor<F: FnMut(u64, f64, &[u32])>(
    primes: &[u64],
    logs: &[f64],
    max_exp: &[u32],
    max_log: f64,
    f: &mut F,
) {
    fn rec<F: FnMut(u64, f64, &[u32])>(
        i: usize,
        d: u64,
        ld: f64,
        primes: &[u64],
        logs: &[f64],
        max_exp: &[u32],
        max_log: f64,
        exps: &mut Exps,
        f: &mut F,
    ) {
        if i == primes.len() {
            f(d, ld, exps);
            return;
        }
        let (mut d, mut ld) = (d, ld);
        exps[i] = 0;
        rec(i + 1, d, ld, primes, logs, max_exp, max_log, exps, f);
        for e in 1..=max_exp[i] {
            d *= primes[i];
            ld += logs[i];
            if ld >= max_log {
                break;
            }
            exps[i] = e;
            rec(i + 1, d, ld, primes, logs, max_exp, max_log, exps, f);
        }
        exps[i] = 0;
    }
    let mut exps: Exps = SmallVec::from_elem(0, primes.len());
    if max_log > 0.0 {
        rec(0, 1, 0.0, primes, logs, max_exp, max_log, &mut exps, f);
    }
}

/// `sum_{d | prod primes, d < Q} mu(d) chi(log d / log Q)` over squarefree `d`
/// built from the given prime logarithms.
pub(crate) fn restricted_mobius_sum(logs: &[f64], log_q: f64, chi: &SmoothCutoff) -> f64 {
    fn rec(i: usize, ld: f64, sign: f64, logs: &[f64], log_q: f64, chi: &SmoothCutoff) -> f64 {
        if i == logs.len() {
            return sign * chi.eval(ld / log_q);
        }
        let mut s = rec(i + 1, ld, sign, logs, log_q, chi);
        if ld + logs[i] < log_q {
            s += rec(i + 1, ld + logs[i], -sign, logs, log_q, chi);
        }
        s
    }
    rec(0, 0.0, 1.0, logs, log_q, chi)
}

/// `h_gamma^{(T)}(m) = sum_{d | m} g(d) chi(log d / log T^gamma)`, with `g` read
/// from a table covering `m`.
pub fn truncated_divisor_sum(g: &SieveTable, m: u64, t: u64, gamma: f64, chi: &SmoothCutoff) -> Result<f64> {
    if m == 0 || m > g.len() {
        return Err(Error::OutOfRange(format!("m = {m} outside 1..={}", g.len())));
    }
    let fac = g.factorize(m);
    Ok(truncated_divisor_sum_factored(g, &fac, gamma * (t as f64).ln(), chi))
}

pub(crate) fn truncated_divisor_sum_factored(
    g: &SieveTable,
    fac: &[(u64, u32)],
    log_cut: f64,
    chi: &SmoothCutoff,
) -> f64 {
    let primes: SmallVec<[u64; 12]> = fac.iter().map(|e| e.0).collect();
    let logs: SmallVec<[f64; 12]> = primes.iter().map(|&p| (p as f64).ln()).collect();
    let exps: SmallVec<[u32; 12]> = fac.iter().map(|e| e.1).collect();
    let mut acc = 0.0;
    for_each_divisor(&primes, &logs, &exps, log_cut, &mut |d, ld, _| {
        acc += g.get(d) * chi.eval(ld / log_cut);
    });
    acc
}

/// `D_gamma(n)`: the largest `prod_{p <= Q} p^{v_p(n)}` not exceeding `x^gamma`,
/// for `x^gamma <= n <= x`.
pub fn erdos_divisor(n: u64, x: u64, gamma: f64) -> Result<u64> {
    let cap = (x as f64).powf(gamma);
    if !((n as f64) >= cap * (1.0 - 1e-12) && n <= x) {
        return Err(Error::OutOfRange(format!(
            "D_gamma needs x^gamma <= n <= x, got n = {n}, x = {x}"
        )));
    }
    Ok(erdos_prefix(&arith::factorize(n), cap))
}

fn erdos_prefix(fac: &[(u64, u32)], cap: f64) -> u64 {
    let mut best = 1u64;
    for &(p, k) in fac {
        let next = best * p.pow(k);
        if next as f64 > cap * (1.0 + 1e-12) {
            break;
        }
        best = next;
    }
    best
}

/// `D'_gamma(n)`: with `m` the `P♭`-part of `n`, `m` itself if `m <= x^gamma`,
/// otherwise `D_gamma(m)`.
pub fn erdos_divisor_flat(n: u64, x: u64, gamma: f64, is_flat: impl Fn(u64) -> bool) -> Result<u64> {
    if n == 0 || n > x {
        return Err(Error::OutOfRange(format!("n = {n} outside 1..={x}")));
    }
    let fac: Factorization = arith::factorize(n).into_iter().filter(|&(p, _)| is_flat(p)).collect();
    let m: u64 = fac.iter().map(|&(p, k)| p.pow(k)).product();
    let cap = (x as f64).powf(gamma);
    Ok(if m as f64 <= cap * (1.0 + 1e-12) {
        m
    } else {
        erdos_prefix(&fac, cap)
    })
}

/// `sigma♭(Q; m) = (sum_{d | m, d ∈ <P♭>} mu(d) chi(log d / log Q))^2`.
pub fn sigma_flat(q: f64, m: u64, is_flat: impl Fn(u64) -> bool, chi: &SmoothCutoff) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::InvalidArgument(format!("sigma♭ needs Q > 1, got {q}")));
    }
    if m == 0 {
        return Err(Error::OutOfRange("sigma♭ is defined for m >= 1".into()));
    }
    let logs: SmallVec<[f64; 12]> = arith::factorize(m)
        .iter()
        .filter(|&&(p, _)| is_flat(p))
        .map(|&(p, _)| (p as f64).ln())
        .collect();
    Ok(restricted_mobius_sum(&logs, q.ln(), chi).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorant::split::{sharp_mobius_transform, split};
    use crate::multfunc::{build_sieve, MultiplicativeFunction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn erdos_examples() {
        assert_eq!(erdos_divisor(60, 10_000, 0.25).unwrap(), 4);
        assert_eq!(erdos_divisor(9973, 10_000, 0.25).unwrap(), 1);
        assert!(erdos_divisor(5, 10_000, 0.25).is_err());
    }

    #[test]
    fn erdos_preimages() {
        // Every n with D(n) = m < x^gamma is n = delta m with P+(m) < P-(delta);
        // exactly those with additionally m p^{v_p(n)} > x^gamma at p = P-(delta).
        let (x, gamma) = (10_000u64, 0.5);
        let mut pre: std::collections::HashMap<u64, Vec<u64>> = Default::default();
        for n in 100..=x {
            pre.entry(erdos_divisor(n, x, gamma).unwrap()).or_default().push(n);
        }
        let mut loose_only = 0;
        for m in 1..100u64 {
            let pm = arith::largest_prime_factor(&arith::factorize(m));
            let loose: Vec<u64> = (100..=x)
                .filter(|n| n % m == 0)
                .filter(|n| arith::smallest_prime_factor(&arith::factorize(n / m)) > pm)
                .collect();
            let exact: Vec<u64> = loose
                .iter()
                .copied()
                .filter(|&n| {
                    let f = arith::factorize(n / m);
                    m * f[0].0.pow(f[0].1) > 100
                })
                .collect();
            let got = pre.remove(&m).unwrap_or_default();
            assert!(got.iter().all(|n| loose.binary_search(n).is_ok()), "m = {m}");
            assert_eq!(got, exact, "m = {m}");
            loose_only += loose.len() - exact.len();
        }
        // 102 = 2 * 3 * 17 has D = 6, yet lies in the loose set for m = 1.
        assert!(loose_only > 0);
    }

    #[test]
    fn flat_erdos_divisor_branches() {
        let flat = |p: u64| p % 4 == 3;
        // P♭-part 3*7 = 21 > 10: Erdős divisor of 21 is 3.
        assert_eq!(erdos_divisor_flat(21 * 5, 10_000, 0.25, flat).unwrap(), 3);
        assert_eq!(erdos_divisor_flat(9 * 5, 10_000, 0.25, flat).unwrap(), 9);
    }

    #[test]
    fn sigma_flat_cases() {
        let chi = SmoothCutoff::chi();
        let flat = |p: u64| p % 4 == 3;
        assert_eq!(sigma_flat(50.0, 5 * 13, flat, &chi).unwrap(), 1.0);
        assert_eq!(sigma_flat(50.0, 7, flat, &chi).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let m = rng.gen_range(1..=10_000u64);
            let mut s = 0.0;
            for d in (1..=m).filter(|d| m % d == 0) {
                let f = arith::factorize(d);
                if f.iter().all(|&(p, _)| flat(p)) {
                    s += arith::mobius(&f) as f64 * chi.eval((d as f64).ln() / 50f64.ln());
                }
            }
            let got = sigma_flat(50.0, m, flat, &chi).unwrap();
            assert!((got - s * s).abs() < 1e-12, "m = {m}");
            assert!(got >= 0.0);
        }
    }

    #[test]
    fn truncated_sum_collapses() {
        let chi = SmoothCutoff::chi();
        let one = split(&MultiplicativeFunction::two_squares());
        let g = build_sieve(&sharp_mobius_transform(&one), 1000).unwrap();
        for m in 1..=1000 {
            assert_eq!(truncated_divisor_sum(&g, m, 1000, 0.25, &chi).unwrap(), 1.0);
        }
        let d = split(&MultiplicativeFunction::divisor_d());
        let g = build_sieve(&sharp_mobius_transform(&d), 10_000).unwrap();
        // T^{gamma/2} = 10 for T = 10^4, gamma = 1/2.
        for p in [2u64, 3, 5, 7] {
            assert_eq!(truncated_divisor_sum(&g, p, 10_000, 0.5, &chi).unwrap(), 2.0);
        }
        // All divisors on the plateau: the full convolution h♯(m) is recovered.
        assert_eq!(truncated_divisor_sum(&g, 6, 10_000, 0.5, &chi).unwrap(), 4.0);
        assert_eq!(truncated_divisor_sum(&g, 1, 10_000, 0.5, &chi).unwrap(), 1.0);
    }
}
