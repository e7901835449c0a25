use crate::multfunc::MultiplicativeFunction;

/// `h♯(p^k) = max(1, |h(p)|, ..., |h(p^k)|)` and `h♭(p^k) = min(1, |h(p^k)|)`.
#[derive(Clone, Debug)]
pub struct SharpFlatSplit {
    pub base: MultiplicativeFunction,
    pub sharp: MultiplicativeFunction,
    pub flat: MultiplicativeFunction,
}

impl SharpFlatSplit {
    /// `p ∈ P♭`, i.e. `h♭(p) < 1`.
    pub fn is_flat_prime(&self, p: u64) -> bool {
        self.flat.prime_power(p, 1).map_or(false, |v| v < 1.0)
    }
}

pub fn split(h: &MultiplicativeFunction) -> SharpFlatSplit {
    let base = h.clone();
    let sharp = h.derived(format!("{}#sharp", h.name()), h.growth(), true, move |p, k| {
        (1..=k).fold(1.0f64, |acc, j| {
            acc.max(base.prime_power(p, j).map_or(f64::NAN, f64::abs))
        })
    });
    let base = h.clone();
    let flat = h.derived(format!("{}#flat", h.name()), 1.0, true, move |p, k| {
        base.prime_power(p, k).map_or(f64::NAN, |v| v.abs().min(1.0))
    });
    SharpFlatSplit {
        base: h.clone(),
        sharp,
        flat,
    }
}

/// `g = mu * h♯`, i.e. `g(p^k) = h♯(p^k) - h♯(p^{k-1})`.
pub fn sharp_mobius_transform(split: &SharpFlatSplit) -> MultiplicativeFunction {
    let sharp = split.sharp.clone();
    split.sharp.derived(
        format!("{}#g", split.base.name()),
        split.sharp.growth(),
        true,
        move |p, k| {
            let hi = sharp.prime_power(p, k).unwrap_or(f64::NAN);
            let lo = sharp.prime_power(p, k - 1).unwrap_or(f64::NAN);
            hi - lo
        },
    )
}
