use crate::arith;
use crate::error::{Error, Result};

/// User overrides for [`make_wcontext`]; `None` keeps the default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WOverrides {
    pub w_of_x: Option<f64>,
    pub q_star: Option<u64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub c: Option<f64>,
}

pub const DEFAULT_B1: f64 = 6.0;
pub const DEFAULT_B2: f64 = 10.0;
pub const DEFAULT_C: f64 = 2.0;

/// `w(x)`, `W(x)`, `W~(x) = q* W(x)` and the truncation exponents at one scale `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct WContext {
    pub x: u64,
    pub w_of_x: f64,
    pub w: u64,
    pub q_star: u64,
    pub w_tilde: u64,
    pub c: f64,
    pub b1: f64,
    pub b2: f64,
    /// Every clamp or adjustment made while building the context.
    pub audit: Vec<String>,
}

impl WContext {
    /// Primes `p <= w(x)`, i.e. the prime divisors of `W`.
    pub fn small_primes(&self) -> Vec<u64> {
        arith::factorize(self.w).iter().map(|&(p, _)| p).collect()
    }

    pub fn log_x(&self) -> f64 {
        (self.x as f64).ln()
    }

    /// `(log x)^{B2}`, the bound on the smooth parts kept by the truncation.
    pub fn smooth_bound(&self) -> f64 {
        self.log_x().powf(self.b2)
    }

    /// `theta(w(x)) = sum_{p <= w(x)} log p = log W`.
    pub fn chebyshev_theta(&self) -> f64 {
        self.small_primes().iter().map(|&p| (p as f64).ln()).sum()
    }
}

fn primorial(w: f64) -> u64 {
    arith::primes_up_to((w * (1.0 + 1e-12)).floor() as u64)
        .into_iter()
        .product()
}

/// Default `w(x) = log log x` (upper end of the admissible band), clamped to
/// at least 2 so that `W >= 2`.
pub fn make_wcontext(x: u64, overrides: &WOverrides) -> Result<WContext> {
    if x < 16 {
        return Err(Error::OutOfRange(format!("W-trick context needs x >= 16, got {x}")));
    }
    let mut audit = Vec::new();
    let log_x = (x as f64).ln();
    let b1 = overrides.b1.unwrap_or(DEFAULT_B1);
    let b2 = overrides.b2.unwrap_or(DEFAULT_B2);
    let c = overrides.c.unwrap_or(DEFAULT_C);
    let mut w_of_x = match overrides.w_of_x {
        Some(w) => {
            if !(w >= 2.0) {
                return Err(Error::InvalidArgument(format!("w(x) override must be >= 2, got {w}")));
            }
            audit.push(format!("w(x) overridden to {w}"));
            w
        }
        None => {
            let w = log_x.ln();
            if w < 2.0 {
                audit.push(format!("w(x) = log log x = {w:.6} clamped to 2"));
                2.0
            } else {
                w
            }
        }
    };
    let q_star = overrides.q_star.unwrap_or(1);
    if q_star == 0 {
        return Err(Error::InvalidArgument("q* must be >= 1".into()));
    }
    let mut w = primorial(w_of_x);
    if arith::factorize(q_star)
        .iter()
        .any(|&(p, _)| p as f64 > w_of_x * (1.0 + 1e-12))
    {
        return Err(Error::InvalidArgument(format!("q* = {q_star} is not {w_of_x}-smooth")));
    }
    let cap = log_x.powf(b1);
    while (q_star as f64) * (w as f64) > cap && overrides.w_of_x.is_none() && w_of_x > 2.0 {
        let largest = arith::largest_prime_factor(&arith::factorize(w));
        w_of_x = (largest - 1).max(2) as f64;
        audit.push(format!("W~ exceeded (log x)^B1 = {cap:.3}; w(x) reduced to {w_of_x}"));
        w = primorial(w_of_x);
    }
    let w_tilde = q_star * w;
    if w_tilde as f64 > cap {
        audit.push(format!("W~ = {w_tilde} exceeds (log x)^B1 = {cap:.3}"));
    }
    Ok(WContext {
        x,
        w_of_x,
        w,
        q_star,
        w_tilde,
        c,
        b1,
        b2,
        audit,
    })
}
