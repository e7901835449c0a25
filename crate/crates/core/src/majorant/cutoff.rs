/// Smooth step `g(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})` on `[0, 1]`,
/// extended by 0 and 1.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / t - 1.0 / (1.0 - t)).exp())
    }
}

/// Bump that is 1 on `[plateau_lo, plateau_hi]`, 0 outside
/// `(support_lo, support_hi)`, with [`smooth_step`] transitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothCutoff {
    pub support_lo: f64,
    pub plateau_lo: f64,
    pub plateau_hi: f64,
    pub support_hi: f64,
}

impl SmoothCutoff {
    /// The `chi` cutoff: support `[-1, 1]`, plateau `[-1/2, 1/2]`.
    pub fn chi() -> Self {
        Self {
            support_lo: -1.0,
            plateau_lo: -0.5,
            plateau_hi: 0.5,
            support_hi: 1.0,
        }
    }

    /// The `lambda` cutoff of `[gamma, 2 gamma]`, supported in `[gamma/2, 4 gamma]`.
    pub fn lambda(gamma: f64) -> Self {
        Self {
            support_lo: gamma / 2.0,
            plateau_lo: gamma,
            plateau_hi: 2.0 * gamma,
            support_hi: 4.0 * gamma,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support_lo || x >= self.support_hi {
            0.0
        } else if x < self.plateau_lo {
            smooth_step((x - self.support_lo) / (self.plateau_lo - self.support_lo))
        } else if x <= self.plateau_hi {
            1.0
        } else {
            smooth_step((self.support_hi - x) / (self.support_hi - self.plateau_hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_anchor_values() {
        let chi = SmoothCutoff::chi();
        assert_eq!(chi.eval(0.0), 1.0);
        assert_eq!(chi.eval(1.0), 0.0);
        assert_eq!(chi.eval(-1.0), 0.0);
        assert_eq!(chi.eval(0.4), 1.0);
        assert!((chi.eval(0.75) - 0.5).abs() < 1e-15);
        assert!((chi.eval(-0.75) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chi_monotone_on_right_transition() {
        let chi = SmoothCutoff::chi();
        let mut prev = chi.eval(0.5);
        for i in 1..=1000 {
            let v = chi.eval(0.5 + 0.5 * i as f64 / 1000.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn lambda_plateau_and_support() {
        let l = SmoothCutoff::lambda(0.25);
        for i in 0..=2000 {
            let x = -0.5 + 2.0 * i as f64 / 2000.0;
            let v = l.eval(x);
            assert!((0.0..=1.0).contains(&v));
            if (0.25..=0.5).contains(&x) {
                assert_eq!(v, 1.0);
            }
            if x <= 0.125 || x >= 1.0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn step_symmetry() {
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-14);
        }
    }
}
