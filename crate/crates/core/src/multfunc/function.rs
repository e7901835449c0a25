use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};

/// Value rule on prime powers `(p, k)`, `k >= 1`.
pub type PrimePowerRule = Arc<dyn Fn(u64, u32) -> f64 + Send + Sync>;

/// A real multiplicative function given by its values on prime powers,
/// together with the constants describing its growth.
#[derive(Clone)]
pub struct MultiplicativeFunction {
    name: String,
    rule: PrimePowerRule,
    growth: f64,
    nonnegative: bool,
    alpha_hint: Option<f64>,
    prime_limit: Option<u64>,
}

impl fmt::Debug for MultiplicativeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeFunction")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .field("nonnegative", &self.nonnegative)
            .field("alpha_hint", &self.alpha_hint)
            .field("prime_limit", &self.prime_limit)
            .finish()
    }
}

impl MultiplicativeFunction {
    pub fn new<F>(name: impl Into<String>, growth: f64, nonnegative: bool, rule: F) -> Result<Self>
    where
        F: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        if !(growth >= 1.0) || !growth.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "growth constant H must be a finite real >= 1, got {growth}"
            )));
        }
        Ok(Self {
            name: name.into(),
            rule: Arc::new(rule),
            growth,
            nonnegative,
            alpha_hint: None,
            prime_limit: None,
        })
    }

    pub fn with_alpha_hint(mut self, alpha: f64) -> Self {
        self.alpha_hint = Some(alpha);
        self
    }

    /// Restrict the function to primes `p <= limit` (e.g. when the prime values
    /// come from a finite coefficient table).
    pub fn with_prime_limit(mut self, limit: u64) -> Self {
        self.prime_limit = Some(limit);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The constant `H` with `|f(p^k)| <= H^k`.
    pub fn growth(&self) -> f64 {
        self.growth
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn alpha_hint(&self) -> Option<f64> {
        self.alpha_hint
    }

    pub fn prime_limit(&self) -> Option<u64> {
        self.prime_limit
    }

    /// `f(p^k)` for `k >= 1`, checking the domain and the growth bound.
    /// `k = 0` returns 1.
    pub fn prime_power(&self, p: u64, k: u32) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        if let Some(limit) = self.prime_limit {
            if p > limit {
                return Err(Error::OutsideDomain {
                    name: self.name.clone(),
                    p,
                    limit,
                });
            }
        }
        let value = (self.rule)(p, k);
        let bound = self.growth.powi(k as i32);
        // Relative slack for bounds that are attained with rounding noise.
        if !(value.abs() <= bound * (1.0 + 1e-12)) {
            return Err(Error::GrowthBound {
                name: self.name.clone(),
                p,
                k,
                value,
                h: self.growth,
            });
        }
        Ok(value)
    }

    pub fn eval_factored(&self, fac: &[(u64, u32)]) -> Result<f64> {
        let mut v = 1.0;
        for &(p, k) in fac {
            v *= self.prime_power(p, k)?;
        }
        Ok(v)
    }

    /// Direct evaluation through trial-division factorisation.
    pub fn eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::OutOfRange(
                "multiplicative functions are defined on n >= 1".into(),
            ));
        }
        let fac: Factorization = arith::factorize(n);
        self.eval_factored(&fac)
    }

    /// A new function with the given rule, sharing name-independent metadata.
    pub(crate) fn derived<F>(&self, name: String, growth: f64, nonnegative: bool, rule: F) -> Self
    where
        F: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        Self {
            name,
            rule: Arc::new(rule),
            growth,
            nonnegative,
            alpha_hint: None,
            prime_limit: self.prime_limit,
        }
    }

    // ---- built-in examples ----

    pub fn all_one() -> Self {
        Self::new("all_one", 1.0, true, |_, _| 1.0)
            .expect("valid")
            .with_alpha_hint(1.0)
    }

    /// `delta^omega(n)`, `omega` the number of distinct prime factors.
    pub fn delta_omega(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta_omega requires delta in (0,1), got {delta}"
            )));
        }
        Ok(Self::new(format!("delta_omega:{delta}"), 1.0, true, move |_, _| delta)?.with_alpha_hint(delta))
    }

    /// Indicator of integers that are sums of two squares.
    pub fn two_squares() -> Self {
        Self::new("two_squares", 1.0, true, |p, k| {
            if p % 4 == 3 && k % 2 == 1 {
                0.0
            } else {
                1.0
            }
        })
        .expect("valid")
        .with_alpha_hint(0.5)
    }

    /// Indicator of integers composed of primes that split in `Q(i)`, i.e. `p = 1 mod 4`.
    pub fn split_primes_gaussian() -> Self {
        Self::new(
            "split_primes_gaussian",
            1.0,
            true,
            |p, _| {
                if p % 4 == 1 {
                    1.0
                } else {
                    0.0
                }
            },
        )
        .expect("valid")
        .with_alpha_hint(0.5)
    }

    /// Number of divisors, `d(p^k) = k + 1`.
    pub fn divisor_d() -> Self {
        Self::new("divisor_d", 2.0, true, |_, k| (k + 1) as f64)
            .expect("valid")
            .with_alpha_hint(2.0)
    }

    /// `|tau(n)| / n^{11/2}` from the Ramanujan tau function, on primes up to
    /// `limit`. Prime-power values follow from the Hecke recursion
    /// `lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1})`.
    pub fn abs_lambda_delta(limit: u64) -> Result<Self> {
        let limit = limit.max(2);
        let lambda = super::tau::normalized_prime_eigenvalues(limit);
        let rule = move |p: u64, k: u32| {
            let lp = lambda[p as usize];
            let (mut prev, mut cur) = (1.0f64, lp);
            for _ in 1..k {
                let next = lp * cur - prev;
                prev = cur;
                cur = next;
            }
            cur.abs()
        };
        Ok(Self::new("abs_lambda_delta", 2.0, true, rule)?
            .with_alpha_hint(8.0 / (3.0 * PI))
            .with_prime_limit(limit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_violation_is_reported() {
        let f = MultiplicativeFunction::new("bad", 1.0, true, |p, _| p as f64).unwrap();
        match f.prime_power(3, 1) {
            Err(Error::GrowthBound { p: 3, k: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(MultiplicativeFunction::new("h", 0.5, true, |_, _| 0.0).is_err());
    }

    #[test]
    fn value_at_one_is_one() {
        for f in [
            MultiplicativeFunction::all_one(),
            MultiplicativeFunction::two_squares(),
            MultiplicativeFunction::divisor_d(),
        ] {
            assert_eq!(f.eval(1).unwrap(), 1.0);
        }
    }

    #[test]
    fn delta_omega_examples() {
        let f = MultiplicativeFunction::delta_omega(0.5).unwrap();
        assert_eq!(f.eval(12).unwrap(), 0.25);
        assert_eq!(f.eval(16).unwrap(), 0.5);
        assert!(MultiplicativeFunction::delta_omega(1.0).is_err());
    }

    #[test]
    fn divisor_function_values() {
        let d = MultiplicativeFunction::divisor_d();
        assert_eq!(d.eval(360).unwrap(), 24.0);
    }

    #[test]
    fn abs_lambda_domain_is_limited() {
        let f = MultiplicativeFunction::abs_lambda_delta(50).unwrap();
        assert!(f.eval(47).is_ok());
        assert!(matches!(f.eval(53), Err(Error::OutsideDomain { .. })));
    }
}
