//! Smallest-prime-factor sieve and bulk evaluation of multiplicative functions.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::arith::Factorization;
use crate::error::{Error, Result};

use super::function::MultiplicativeFunction;

/// Smallest prime factor of every `2 <= n <= limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    /// Linear sieve; every composite is crossed out exactly once.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::OutOfRange(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::OutOfRange(format!("sieve limit {limit} exceeds 32-bit indices")));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| self.is_prime(n))
    }

    pub fn primes_up_to(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        (2..=x.min(self.limit)).filter(move |&n| self.is_prime(n))
    }

    /// Factorisation read off the table; `n` must be in `1..=limit`.
    pub fn factorize(&self, mut n: u64) -> Factorization {
        debug_assert!(n >= 1 && n <= self.limit);
        let mut out = Factorization::new();
        while n > 1 {
            let p = self.spf(n);
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        out
    }
}

/// Values `f(1..=T)` of a multiplicative function, immutable once built.
#[derive(Debug, Clone)]
pub struct SieveTable {
    name: String,
    spf: Arc<SpfTable>,
    // values[0] is unused and stored as 0.
    values: Vec<f64>,
}

/// Evaluate `f` on `1..=t` with a fresh smallest-prime-factor table.
pub fn build_sieve(f: &MultiplicativeFunction, t: u64) -> Result<SieveTable> {
    let spf = Arc::new(SpfTable::new(t)?);
    build_sieve_with(f, spf)
}

/// Evaluate `f` over the range of an existing prime table, so several
/// functions can share one sieve.
pub fn build_sieve_with(f: &MultiplicativeFunction, spf: Arc<SpfTable>) -> Result<SieveTable> {
    let t = spf.limit() as usize;
    let mut values = vec![0.0f64; t + 1];
    values[1] = 1.0;
    for n in 2..=t {
        let p = spf.spf[n] as usize;
        let mut rest = n / p;
        let mut k = 1u32;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        values[n] = values[rest] * f.prime_power(p as u64, k)?;
    }
    Ok(SieveTable {
        name: f.name().to_string(),
        spf,
        values,
    })
}

const MAGIC: &[u8; 4] = b"MCSV";
const VERSION: u32 = 1;

impl SieveTable {
    /// Wrap externally computed values (`values[n]` for `n = 1..=T`).
    pub fn from_values(name: impl Into<String>, values_from_one: Vec<f64>) -> Result<Self> {
        let t = values_from_one.len() as u64;
        let spf = Arc::new(SpfTable::new(t)?);
        let mut values = Vec::with_capacity(values_from_one.len() + 1);
        values.push(0.0);
        values.extend(values_from_one);
        Ok(Self {
            name: name.into(),
            spf,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest argument covered.
    pub fn len(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spf_table(&self) -> &Arc<SpfTable> {
        &self.spf
    }

    /// `f(n)` for `1 <= n <= T`.
    #[inline]
    pub fn get(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    pub fn try_get(&self, n: u64) -> Result<f64> {
        if n == 0 || n > self.len() {
            return Err(Error::OutOfRange(format!(
                "{}: argument {n} outside 1..={}",
                self.name,
                self.len()
            )));
        }
        Ok(self.values[n as usize])
    }

    /// Raw slice including the unused slot 0.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        self.spf.factorize(n)
    }

    /// Flat binary form: magic, version, `T`, function name, then `T`
    /// little-endian f64 values for `n = 1..=T`.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.len().to_le_bytes())?;
        let name = self.name.as_bytes();
        w.write_all(&(name.len() as u32).to_le_bytes())?;
        w.write_all(name)?;
        for v in &self.values[1..] {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        r.read_exact(&mut b8)?;
        let t = u64::from_le_bytes(b8);
        r.read_exact(&mut b4)?;
        let name_len = u32::from_le_bytes(b4) as usize;
        let mut name = vec![0u8; name_len];
        r.read_exact(&mut name)?;
        let name = String::from_utf8(name).map_err(|e| Error::Format(e.to_string()))?;
        let mut values = Vec::with_capacity(t as usize);
        for _ in 0..t {
            r.read_exact(&mut b8)?;
            values.push(f64::from_le_bytes(b8));
        }
        Self::from_values(name, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force test for sums of two squares.
    fn is_sum_of_two_squares(n: u64) -> bool {
        let mut a = 0u64;
        while a * a <= n {
            let rest = n - a * a;
            let b = (rest as f64).sqrt() as u64;
            if (b.saturating_sub(1)..=b + 1).any(|c| c * c == rest) {
                return true;
            }
            a += 1;
        }
        false
    }

    #[test]
    fn spf_matches_trial_division() {
        let spf = SpfTable::new(10_000).unwrap();
        for n in 2..=10_000 {
            assert_eq!(spf.spf(n), arith::factorize(n)[0].0);
        }
        assert_eq!(spf.primes().count(), 1229);
    }

    #[test]
    fn all_one_table() {
        let t = build_sieve(&MultiplicativeFunction::all_one(), 10).unwrap();
        assert_eq!(&t.values()[1..], &[1.0; 10]);
    }

    #[test]
    fn two_squares_matches_representation_search() {
        let t = build_sieve(&MultiplicativeFunction::two_squares(), 10_000).unwrap();
        assert_eq!((t.get(5), t.get(7), t.get(9)), (1.0, 0.0, 1.0));
        for n in 1..=10_000 {
            assert_eq!(t.get(n) == 1.0, is_sum_of_two_squares(n), "n = {n}");
        }
    }

    #[test]
    fn delta_omega_at_twelve() {
        let t = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 12).unwrap();
        assert_eq!(t.get(12), 0.25);
    }

    #[test]
    fn random_spot_checks_and_multiplicativity() {
        let funcs = [
            MultiplicativeFunction::delta_omega(0.3).unwrap(),
            MultiplicativeFunction::divisor_d(),
            MultiplicativeFunction::two_squares(),
            MultiplicativeFunction::abs_lambda_delta(20_000).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for f in &funcs {
            let t = build_sieve(f, 20_000).unwrap();
            for _ in 0..1000 {
                let n = rng.gen_range(1..=20_000u64);
                let direct = f.eval(n).unwrap();
                assert!((t.get(n) - direct).abs() <= 1e-12 * direct.abs(), "{} at {n}", f.name());
            }
            let mut checked = 0;
            while checked < 300 {
                let m = rng.gen_range(1..=200u64);
                let n = rng.gen_range(1..=100u64);
                if arith::gcd(m, n) != 1 {
                    continue;
                }
                let prod = t.get(m) * t.get(n);
                assert!((t.get(m * n) - prod).abs() <= 1e-12 * prod.abs(), "{}", f.name());
                checked += 1;
            }
        }
    }

    #[test]
    fn growth_violation_surfaces_from_sieve() {
        let f = MultiplicativeFunction::new("grows", 1.5, true, |_, k| 2f64.powi(k as i32)).unwrap();
        assert!(matches!(build_sieve(&f, 100), Err(Error::GrowthBound { p: 2, .. })));
    }

    #[test]
    fn binary_roundtrip() {
        let t = build_sieve(&MultiplicativeFunction::delta_omega(0.5).unwrap(), 1000).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"MCSV");
        assert_eq!(buf.len(), 4 + 4 + 8 + 4 + t.name().len() + 8 * 1000);
        let back = SieveTable::read_from(&buf[..]).unwrap();
        assert_eq!(back.name(), t.name());
        assert_eq!(back.values(), t.values());
        assert!(SieveTable::read_from(&b"XXXX"[..]).is_err());
    }
}
