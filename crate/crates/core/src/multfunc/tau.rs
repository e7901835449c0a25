//! Ramanujan's tau function from the product expansion
//! `Delta = q * prod_{n >= 1} (1 - q^n)^24`.
//!
//! The Euler product `prod (1 - q^n)` is written down sparsely from the
//! pentagonal number theorem and raised to the 24th power by binary
//! exponentiation on truncated series. Small tables use exact big-integer
//! schoolbook products; larger ones multiply modulo several NTT primes and
//! recombine by CRT.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{self};

/// Tables up to this length use the exact schoolbook path.
pub const SCHOOLBOOK_LIMIT: usize = 2048;

/// Coefficients of `prod_{n>=1} (1 - q^n)` up to `q^len-1`, as a sparse list
/// of `(exponent, sign)` from the pentagonal numbers `k(3k-1)/2`.
pub fn euler_product_sparse(len: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        terms.push((a, sign));
        if b < len {
            terms.push((b, sign));
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

/// `tau(1..=t)`; entry `i` of the result is `tau(i + 1)`.
///
/// # Panics
/// If the CRT reconstruction ever leaves the Deligne range, which would mean
/// the modular path ran out of precision.
pub fn tau_coefficients(t: usize) -> Vec<BigInt> {
    if t == 0 {
        return Vec::new();
    }
    if t <= SCHOOLBOOK_LIMIT {
        tau_schoolbook(t)
    } else {
        tau_multimodular(t)
    }
}

/// Exact big-integer path (binary exponentiation with truncated products).
pub fn tau_schoolbook(t: usize) -> Vec<BigInt> {
    let len = t;
    let mut eta = vec![BigInt::zero(); len];
    for (e, s) in euler_product_sparse(len) {
        eta[e] = BigInt::from(s);
    }
    let mut result: Option<Vec<BigInt>> = None;
    let mut base = eta;
    let mut exp = 24u32;
    while exp > 0 {
        if exp & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul_truncated_big(&r, &base, len),
            });
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_truncated_big(&base, &base, len);
        }
    }
    result.expect("exponent is positive")
}

fn mul_truncated_big(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    let nz_b: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for &(j, bj) in &nz_b {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

// NTT-friendly primes `c * 2^k + 1` with primitive root 3, k >= 21.
const NTT_PRIMES: [u64; 5] = [998_244_353, 167_772_161, 469_762_049, 1_004_535_809, 2_013_265_921];
const NTT_ROOT: [u64; 5] = [3, 3, 3, 3, 31];

fn ntt(a: &mut [u64], invert: bool, p: u64, g: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w = arith::pow_mod(g, (p - 1) / len as u64, p);
        let w = if invert { arith::pow_mod(w, p - 2, p) } else { w };
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            twiddles.push(cur);
            cur = cur * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * twiddles[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = arith::pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn mul_truncated_mod(a: &[u64], b: &[u64], len: usize, p: u64, g: u64) -> Vec<u64> {
    let size = (2 * len).next_power_of_two();
    let mut fa = vec![0u64; size];
    fa[..a.len()].copy_from_slice(a);
    ntt(&mut fa, false, p, g);
    let same = std::ptr::eq(a, b);
    if same {
        for x in fa.iter_mut() {
            *x = *x * *x % p;
        }
    } else {
        let mut fb = vec![0u64; size];
        fb[..b.len()].copy_from_slice(b);
        ntt(&mut fb, false, p, g);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = *x * *y % p;
        }
    }
    ntt(&mut fa, true, p, g);
    fa.truncate(len);
    fa
}

fn eta24_mod(len: usize, p: u64, g: u64) -> Vec<u64> {
    let mut eta = vec![0u64; len];
    for (e, s) in euler_product_sparse(len) {
        eta[e] = if s > 0 { 1 } else { p - 1 };
    }
    let e2 = mul_truncated_mod(&eta, &eta, len, p, g);
    let e4 = mul_truncated_mod(&e2, &e2, len, p, g);
    let e8 = mul_truncated_mod(&e4, &e4, len, p, g);
    let e16 = mul_truncated_mod(&e8, &e8, len, p, g);
    mul_truncated_mod(&e16, &e8, len, p, g)
}

/// Multi-modular path: NTT products modulo five primes, Garner recombination.
pub fn tau_multimodular(t: usize) -> Vec<BigInt> {
    let len = t;
    assert!(
        (2 * len).next_power_of_two() <= 1 << 21,
        "tau table of length {len} exceeds the NTT transform size"
    );
    let residues: Vec<Vec<u64>> = NTT_PRIMES
        .iter()
        .zip(NTT_ROOT)
        .map(|(&p, g)| eta24_mod(len, p, g))
        .collect();

    // Garner: x = c0 + c1 p0 + c2 p0 p1 + ...
    let k = NTT_PRIMES.len();
    let mut inv = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..i {
            inv[j][i] = arith::inv_mod(NTT_PRIMES[j] % NTT_PRIMES[i], NTT_PRIMES[i]).expect("coprime");
        }
    }
    let mut modulus = BigInt::from(1u8);
    let mut prefix = Vec::with_capacity(k);
    for &p in &NTT_PRIMES {
        prefix.push(modulus.clone());
        modulus *= p;
    }
    let half = &modulus >> 1u32;

    (0..len)
        .map(|n| {
            let mut c = [0u64; 5];
            for i in 0..k {
                let p = NTT_PRIMES[i];
                let mut x = residues[i][n];
                for j in 0..i {
                    let diff = (x + p - c[j] % p) % p;
                    x = diff * inv[j][i] % p;
                }
                c[i] = x;
            }
            let mut value = BigInt::zero();
            for i in 0..k {
                value += &prefix[i] * c[i];
            }
            if value > half {
                value -= &modulus;
            }
            let m = n as u64 + 1;
            debug_assert!(deligne_holds(m, &value), "CRT overflow at n = {m}");
            value
        })
        .collect()
}

/// `|tau(n)| <= d(n) n^{11/2}`, checked exactly as `tau(n)^2 <= d(n)^2 n^11`.
pub fn deligne_holds(n: u64, tau_n: &BigInt) -> bool {
    let d = arith::number_of_divisors(&arith::factorize(n));
    let lhs = tau_n * tau_n;
    let rhs = BigInt::from(d) * BigInt::from(d) * num_traits::pow(BigInt::from(n), 11);
    lhs <= rhs
}

/// `tau(n) / n^{11/2}` in double precision.
pub fn normalized(n: u64, tau_n: &BigInt) -> f64 {
    // Split the scaling to stay inside f64 range for large n.
    let (sign, mag) = (tau_n.sign(), tau_n.abs());
    let bits = mag.bits();
    let shift = bits.saturating_sub(60);
    let top = (&mag >> shift).to_f64().unwrap_or(0.0);
    let value = top * 2f64.powi(shift as i32) / (n as f64).powf(5.5);
    if sign == Sign::Minus {
        -value
    } else {
        value
    }
}

/// Table indexed by `p` with `lambda(p) = tau(p)/p^{11/2}` at primes `p <= limit`
/// (zero elsewhere).
pub fn normalized_prime_eigenvalues(limit: u64) -> Vec<f64> {
    let taus = tau_coefficients(limit as usize);
    let mut out = vec![0.0; limit as usize + 1];
    for p in arith::primes_up_to(limit) {
        out[p as usize] = normalized(p, &taus[p as usize - 1]);
    }
    out
}
