//! Small integer helpers shared by the sieve, density and character code.

use num_integer::Integer;
use smallvec::SmallVec;

/// Prime factorisation as ascending `(p, v_p(n))` pairs.
pub type Factorization = SmallVec<[(u64, u32); 8]>;

/// Primes up to and including `n` (plain sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorisation. Only meant for moderate `n` (oracles, moduli).
pub fn factorize(mut n: u64) -> Factorization {
    let mut out = Factorization::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// All divisors of the number with the given factorisation, unsorted.
pub fn divisors(fac: &[(u64, u32)]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, k) in fac {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

/// Product of `p^{v_p(n)}` over primes `p <= bound`.
pub fn smooth_part(n: u64, bound: u64) -> u64 {
    factorize_smooth(n, bound)
}

fn factorize_smooth(mut n: u64, bound: u64) -> u64 {
    let mut part = 1u64;
    let mut p = 2u64;
    while p <= bound && n > 1 {
        while n % p == 0 {
            n /= p;
            part *= p;
        }
        p += 1;
    }
    part
}

/// `(squarefree, root)` with `n = squarefree * root^2`.
pub fn squarefree_decomposition(fac: &[(u64, u32)]) -> (u64, u64) {
    let mut sf = 1u64;
    let mut root = 1u64;
    for &(p, k) in fac {
        if k % 2 == 1 {
            sf *= p;
        }
        root *= p.pow(k / 2);
    }
    (sf, root)
}

/// Möbius function from a factorisation.
pub fn mobius(fac: &[(u64, u32)]) -> i32 {
    if fac.iter().any(|&(_, k)| k > 1) {
        0
    } else if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Largest prime factor (1 for n = 1).
pub fn largest_prime_factor(fac: &[(u64, u32)]) -> u64 {
    fac.last().map_or(1, |&(p, _)| p)
}

/// Smallest prime factor (`u64::MAX` for n = 1, so that `P+(m) < P-(1)` holds).
pub fn smallest_prime_factor(fac: &[(u64, u32)]) -> u64 {
    fac.first().map_or(u64::MAX, |&(p, _)| p)
}

pub fn number_of_divisors(fac: &[(u64, u32)]) -> u64 {
    fac.iter().map(|&(_, k)| k as u64 + 1).product()
}

/// All `n <= bound` composed of the given primes, with factorisations,
/// in ascending order of `n`.
pub fn smooth_numbers(primes: &[u64], bound: u64) -> Vec<(u64, Factorization)> {
    let mut out = vec![(1u64, Factorization::new())];
    for &p in primes {
        let len = out.len();
        for i in 0..len {
            let (base, ref fac) = out[i];
            let fac = fac.clone();
            let mut n = base;
            let mut k = 0u32;
            while let Some(next) = n.checked_mul(p).filter(|&v| v <= bound) {
                n = next;
                k += 1;
                let mut f = fac.clone();
                f.push((p, k));
                out.push((n, f));
            }
        }
    }
    out.sort_unstable_by_key(|e| e.0);
    out
}
