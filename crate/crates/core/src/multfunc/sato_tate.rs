//! The Sato–Tate distribution of `|lambda(p)|` on `[0, 2]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `mu(alpha) = (2/pi) arcsin(alpha/2) + (1/pi) sin(2 arcsin(alpha/2))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SatoTateDensity;

impl SatoTateDensity {
    pub fn mu(&self, alpha: f64) -> Result<f64> {
        sato_tate_mu(alpha)
    }

    /// `mu'(alpha) = sqrt(4 - alpha^2)/pi`.
    pub fn density(&self, alpha: f64) -> f64 {
        (4.0 - alpha * alpha).max(0.0).sqrt() / PI
    }

    pub fn mean(&self) -> f64 {
        sato_tate_mean()
    }
}

pub fn sato_tate_mu(alpha: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("alpha = {alpha} outside [0, 2]")));
    }
    let theta = (alpha / 2.0).asin();
    Ok(2.0 / PI * theta + (2.0 * theta).sin() / PI)
}

/// `int_0^2 alpha d mu(alpha)`, by adaptive Simpson on `alpha mu'(alpha)`.
pub fn sato_tate_mean() -> f64 {
    let st = SatoTateDensity;
    adaptive_simpson(&|a: f64| a * st.density(a), 0.0, 2.0, 1e-12, 50)
}

/// Lower Riemann–Stieltjes sum `sum_n (2(n-1)/N)(mu(2n/N) - mu(2(n-1)/N))`.
pub fn sato_tate_lower_sum(steps: usize) -> f64 {
    let n = steps as f64;
    (1..=steps)
        .map(|i| {
            let a0 = 2.0 * (i as f64 - 1.0) / n;
            let a1 = 2.0 * i as f64 / n;
            a0 * (sato_tate_mu(a1.min(2.0)).unwrap() - sato_tate_mu(a0).unwrap())
        })
        .sum()
}

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
