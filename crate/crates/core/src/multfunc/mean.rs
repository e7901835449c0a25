//! Mean values `S_f(x)`, `S_f(x; q, a)` and the diagnostic statistics built on them.

use crate::arith;
use crate::error::{Error, Result};
use crate::sum::KahanSum;

use super::function::MultiplicativeFunction;
use super::sieve::SieveTable;

fn check_range(tbl: &SieveTable, x: u64) -> Result<()> {
    if x == 0 || x > tbl.len() {
        return Err(Error::OutOfRange(format!(
            "x = {x} outside 1..={} for table {}",
            tbl.len(),
            tbl.name()
        )));
    }
    Ok(())
}

/// `S_f(x) = (1/x) sum_{n <= x} f(n)`, summed in ascending order.
pub fn mean_value(tbl: &SieveTable, x: u64) -> Result<f64> {
    check_range(tbl, x)?;
    let s: KahanSum = tbl.values()[1..=x as usize].iter().copied().collect();
    Ok(s.value() / x as f64)
}

/// `sum_{n <= x, n = a mod q} f(n)` (unnormalised).
pub fn progression_sum(tbl: &SieveTable, x: u64, q: u64, a: i64) -> Result<f64> {
    check_range(tbl, x)?;
    if q == 0 {
        return Err(Error::InvalidArgument("modulus q must be >= 1".into()));
    }
    let r = a.rem_euclid(q as i64) as u64;
    let start = if r == 0 { q } else { r };
    let mut s = KahanSum::new();
    let mut n = start;
    while n <= x {
        s.add(tbl.get(n));
        n += q;
    }
    Ok(s.value())
}

/// `S_f(x; q, a) = (q/x) sum_{n <= x, n = a (q)} f(n)`.
pub fn mean_value_progression(tbl: &SieveTable, x: u64, q: u64, a: i64) -> Result<f64> {
    Ok(progression_sum(tbl, x, q, a)? * q as f64 / x as f64)
}

/// `(1/x) sum_{p <= x} |f(p)| log p`, the empirical prime-density statistic.
pub fn estimate_alpha(tbl: &SieveTable, x: u64) -> Result<f64> {
    check_range(tbl, x)?;
    let spf = tbl.spf_table();
    let s: KahanSum = spf
        .primes_up_to(x)
        .map(|p| tbl.get(p).abs() * (p as f64).ln())
        .collect();
    Ok(s.value() / x as f64)
}

/// `sum_{p <= x, p not dividing q} |f(p)|/p`.
pub fn prime_reciprocal_sum(tbl: &SieveTable, x: u64, q: u64) -> Result<f64> {
    check_range(tbl, x)?;
    let s: KahanSum = tbl
        .spf_table()
        .primes_up_to(x)
        .filter(|&p| q % p != 0)
        .map(|p| tbl.get(p).abs() / p as f64)
        .collect();
    Ok(s.value())
}

/// `prod_{p <= x, p not dividing q} (1 + |f(p)|/p)`, accumulated in log space.
pub fn euler_envelope(tbl: &SieveTable, x: u64, q: u64, strict: bool) -> Result<f64> {
    check_range(tbl, x)?;
    let s: KahanSum = tbl
        .spf_table()
        .primes_up_to(x)
        .filter(|&p| q % p != 0 && !(strict && p == x))
        .map(|p| (tbl.get(p).abs() / p as f64).ln_1p())
        .collect();
    Ok(s.value().exp())
}

/// The envelope `(q/phi(q)) (1/log x) exp(sum_{p <= x, p ∤ q} |f(p)|/p)`.
/// The absolute implied constant is not part of the value.
pub fn shiu_upper_bound(tbl: &SieveTable, x: u64, q: u64) -> Result<f64> {
    check_range(tbl, x)?;
    if x < 2 {
        return Err(Error::OutOfRange("shiu bound needs x >= 2".into()));
    }
    if q == 0 || q.saturating_mul(q) > x {
        return Err(Error::OutOfRange(format!(
            "need 1 <= q <= sqrt(x), got q = {q}, x = {x}"
        )));
    }
    let ratio = q as f64 / arith::euler_phi(q) as f64;
    Ok(ratio / (x as f64).ln() * prime_reciprocal_sum(tbl, x, q)?.exp())
}

/// `sum_{p <= X} (|f(p)| - Re(f(p) p^{it}))/p`. A diagnostic partial sum only.
pub fn elliott_partial_sum(f: &MultiplicativeFunction, big_x: u64, t: f64) -> Result<f64> {
    if big_x < 2 {
        return Err(Error::OutOfRange("elliott partial sum needs X >= 2".into()));
    }
    let mut s = KahanSum::new();
    for p in arith::primes_up_to(big_x) {
        let v = f.prime_power(p, 1)?;
        let pf = p as f64;
        s.add((v.abs() - v * (t * pf.ln()).cos()) / pf);
    }
    Ok(s.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfunc::build_sieve;

    #[test]
    fn trivial_means() {
        let one = build_sieve(&MultiplicativeFunction::all_one(), 10).unwrap();
        assert_eq!(mean_value(&one, 10).unwrap(), 1.0);
        assert_eq!(mean_value_progression(&one, 10, 2, 1).unwrap(), 1.0);
        assert!((mean_value_progression(&one, 10, 3, 1).unwrap() - 1.2).abs() < 1e-15);
        assert!(mean_value(&one, 11).is_err());
        assert!(mean_value_progression(&one, 10, 0, 1).is_err());

        let dw = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 4).unwrap();
        assert_eq!(mean_value(&dw, 4).unwrap(), 0.625);
    }

    #[test]
    fn two_squares_mean_matches_direct_count() {
        let t = build_sieve(&MultiplicativeFunction::two_squares(), 10_000).unwrap();
        let mut count = 0u64;
        for n in 1..=10_000u64 {
            let mut a = 0u64;
            let mut hit = false;
            while a * a <= n && !hit {
                let r = n - a * a;
                let b = (r as f64).sqrt().round() as u64;
                hit = b * b == r;
                a += 1;
            }
            count += hit as u64;
        }
        assert_eq!(mean_value(&t, 10_000).unwrap(), count as f64 / 10_000.0);
    }

    #[test]
    fn delta_omega_progression_matches_filtered_loop() {
        let t = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 1000).unwrap();
        let mut s = 0.0;
        for n in (1..=1000u64).filter(|n| n % 4 == 1) {
            s += 0.5f64.powi(crate::arith::factorize(n).len() as i32);
        }
        let got = mean_value_progression(&t, 1000, 4, 1).unwrap();
        assert!((got - 4.0 * s / 1000.0).abs() < 1e-14);
    }

    #[test]
    fn residue_classes_telescope() {
        let t = build_sieve(&MultiplicativeFunction::two_squares(), 5000).unwrap();
        for q in 1..=12u64 {
            let total: f64 = (0..q as i64)
                .map(|a| mean_value_progression(&t, 4999, q, a).unwrap())
                .sum::<f64>()
                / q as f64;
            assert!((total - mean_value(&t, 4999).unwrap()).abs() < 1e-13, "q = {q}");
        }
    }

    #[test]
    fn alpha_statistics() {
        let one = build_sieve(&MultiplicativeFunction::all_one(), 100_000).unwrap();
        let a = estimate_alpha(&one, 100_000).unwrap();
        assert!((0.98..=1.0).contains(&a), "alpha = {a}");
        let zero = MultiplicativeFunction::new("zero_on_primes", 1.0, true, |_, _| 0.0).unwrap();
        let z = build_sieve(&zero, 1000).unwrap();
        assert_eq!(estimate_alpha(&z, 1000).unwrap(), 0.0);
        let ts = build_sieve(&MultiplicativeFunction::two_squares(), 100_000).unwrap();
        let a2 = estimate_alpha(&ts, 100_000).unwrap();
        assert!((a2 - 0.5).abs() < 0.02, "alpha = {a2}");
    }

    #[test]
    fn shiu_envelope_for_constants() {
        let one = build_sieve(&MultiplicativeFunction::all_one(), 1_000_000).unwrap();
        // Mertens: sum_{p<=x} 1/p = log log x + M + o(1), so the envelope over
        // S_1(x) = 1 tends to e^M with M the Meissel–Mertens constant.
        let b = shiu_upper_bound(&one, 1_000_000, 1).unwrap();
        let mertens = 0.261_497_212_847_642_8f64.exp();
        assert!((b - mertens).abs() < 0.01, "ratio = {b}");
        assert!(shiu_upper_bound(&one, 1_000_000, 1001).is_err());

        let zero = MultiplicativeFunction::new("zero_on_primes", 1.0, true, |_, _| 0.0).unwrap();
        let z = build_sieve(&zero, 10_000).unwrap();
        let v = shiu_upper_bound(&z, 10_000, 6).unwrap();
        assert!((v - 3.0 / (10_000f64).ln()).abs() < 1e-14);
    }

    #[test]
    fn shiu_dominates_delta_omega_progression() {
        let t = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 100_000).unwrap();
        let b = shiu_upper_bound(&t, 100_000, 6).unwrap();
        let s = mean_value_progression(&t, 100_000, 6, 1).unwrap();
        assert!(b.is_finite() && b > 0.0);
        let fitted = s / b;
        assert!(fitted > 0.0 && fitted < 10.0, "fitted constant {fitted}");
    }

    #[test]
    fn elliott_sums() {
        let one = MultiplicativeFunction::all_one();
        assert_eq!(elliott_partial_sum(&one, 1000, 0.0).unwrap(), 0.0);
        let neg = MultiplicativeFunction::new("minus_one", 1.0, false, |_, _| -1.0).unwrap();
        let direct: f64 = crate::arith::primes_up_to(100).iter().map(|&p| 2.0 / p as f64).sum();
        let got = elliott_partial_sum(&neg, 100, 0.0).unwrap();
        assert!((got - direct).abs() < 1e-14);
        assert!((got / 2.0 - 1.8028).abs() < 1e-3);
        let t1 = elliott_partial_sum(&one, 1000, 1.0).unwrap();
        let t2 = elliott_partial_sum(&one, 100_000, 1.0).unwrap();
        assert!(t2 > t1 && t1 > 0.0);
    }
}
