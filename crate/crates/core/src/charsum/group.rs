//! `(Z/qZ)^*` as a product of cyclic components, and its characters as
//! exponent vectors.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith;
use crate::error::{Error, Result};

/// One cyclic factor: `index[n mod q]` is the discrete log of the image of `n`
/// in this factor (`u32::MAX` for non-units).
#[derive(Clone, Debug)]
struct Component {
    order: u64,
    index: Vec<u32>,
}

/// A character, given by one exponent per cyclic component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub exps: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct CharacterGroup {
    q: u64,
    components: Vec<Component>,
    /// lcm of the component orders (the exponent of the group).
    exponent: u64,
    roots: Vec<Complex64>,
}

/// Smallest primitive root modulo an odd prime power.
fn primitive_root(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let fac = arith::factorize(phi_p);
    let g = (2..p)
        .find(|&g| fac.iter().all(|&(r, _)| arith::pow_mod(g, phi_p / r, p) != 1))
        .unwrap_or(1);
    if e >= 2 && arith::pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn cyclic_component(q: u64, pe: u64, gen: u64, order: u64) -> Component {
    let mut log = vec![u32::MAX; pe as usize];
    let mut x = 1u64;
    for k in 0..order {
        log[x as usize] = k as u32;
        x = x * gen % pe;
    }
    let index = (0..q).map(|n| log[(n % pe) as usize]).collect();
    Component { order, index }
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be >= 1".into()));
        }
        if q > 1 << 24 {
            return Err(Error::OutOfRange(format!(
                "modulus {q} too large for a dense log table"
            )));
        }
        let mut components = Vec::new();
        for (p, e) in arith::factorize(q) {
            let pe = p.pow(e);
            if p == 2 {
                if e >= 2 {
                    // -1 generates the order-2 factor.
                    let c = cyclic_component(q, 4, 3, 2);
                    if e >= 3 {
                        // n = ±5^k mod 2^e; sign read off n mod 4.
                        let order5 = pe / 4;
                        let mut log = vec![u32::MAX; pe as usize];
                        let mut x = 1u64;
                        for k in 0..order5 {
                            log[x as usize] = k as u32;
                            log[(pe - x) as usize] = k as u32;
                            x = x * 5 % pe;
                        }
                        components.push(c);
                        components.push(Component {
                            order: order5,
                            index: (0..q).map(|n| log[(n % pe) as usize]).collect(),
                        });
                    } else {
                        components.push(c);
                    }
                } else {
                    // (Z/2)^* is trivial but oddness still has to be recorded.
                    components.push(Component {
                        order: 1,
                        index: (0..q).map(|n| if n % 2 == 1 { 0 } else { u32::MAX }).collect(),
                    });
                }
            } else {
                let g = primitive_root(p, e);
                components.push(cyclic_component(q, pe, g, pe / p * (p - 1)));
            }
        }
        let exponent = components.iter().fold(1u64, |acc, c| arith::lcm(acc, c.order));
        let roots = (0..exponent)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / exponent as f64))
            .collect();
        Ok(Self {
            q,
            components,
            exponent,
            roots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn orders(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.order).collect()
    }

    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.order).product()
    }

    pub fn trivial(&self) -> Character {
        Character {
            exps: vec![0; self.components.len()],
        }
    }

    /// All `phi(q)` characters in mixed-radix order.
    pub fn characters(&self) -> Vec<Character> {
        let orders = self.orders();
        let mut out = vec![self.trivial()];
        for (j, &ord) in orders.iter().enumerate() {
            let len = out.len();
            for k in 1..ord {
                for i in 0..len {
                    let mut c = out[i].clone();
                    c.exps[j] = k;
                    out.push(c);
                }
            }
        }
        out.sort();
        out
    }

    /// `chi(n) = exp(2 pi i phase / exponent)`, `None` when `gcd(n, q) > 1`.
    pub fn phase(&self, chi: &Character, n: u64) -> Option<u64> {
        let r = (n % self.q) as usize;
        let mut acc = 0u64;
        for (c, &a) in self.components.iter().zip(&chi.exps) {
            let k = c.index[r];
            if k == u32::MAX {
                return None;
            }
            acc = (acc + a * k as u64 % c.order * (self.exponent / c.order)) % self.exponent;
        }
        Some(acc)
    }

    pub fn eval(&self, chi: &Character, n: u64) -> Complex64 {
        self.phase(chi, n)
            .map_or(Complex64::new(0.0, 0.0), |k| self.roots[k as usize])
    }

    /// `chi(0..q)`.
    pub fn values(&self, chi: &Character) -> Vec<Complex64> {
        (0..self.q).map(|n| self.eval(chi, n)).collect()
    }

    pub fn is_trivial_on(&self, chi: &Character, elements: &[u64]) -> bool {
        elements.iter().all(|&n| self.phase(chi, n) == Some(0))
    }

    /// Units `n mod q` with `n = 1 mod d` (the kernel of reduction mod `d`).
    pub fn reduction_kernel(&self, d: u64) -> Result<Vec<u64>> {
        if d == 0 || self.q % d != 0 {
            return Err(Error::InvalidArgument(format!("{d} does not divide {}", self.q)));
        }
        Ok((0..self.q)
            .filter(|&n| n % d == 1 % d && arith::gcd(n, self.q) == 1)
            .collect())
    }

    /// Split the characters into those induced from characters mod `d` and
    /// the rest.
    pub fn partition_by_induced(&self, d: u64) -> Result<(Vec<Character>, Vec<Character>)> {
        let kernel = self.reduction_kernel(d)?;
        Ok(self
            .characters()
            .into_iter()
            .partition(|c| self.is_trivial_on(c, &kernel)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_totient() {
        for q in 1..=200u64 {
            let g = CharacterGroup::new(q).unwrap();
            assert_eq!(g.order(), arith::euler_phi(q), "q = {q}");
            assert_eq!(g.characters().len() as u64, arith::euler_phi(q));
        }
        assert_eq!(CharacterGroup::new(8).unwrap().characters().len(), 4);
    }

    #[test]
    fn mod_five_against_primitive_root_table() {
        // 2 is a primitive root mod 5: 2^0, 2^1, 2^2, 2^3 = 1, 2, 4, 3.
        let g = CharacterGroup::new(5).unwrap();
        let i = Complex64::new(0.0, 1.0);
        for (k, chi) in g.characters().iter().enumerate() {
            for (j, n) in [1u64, 2, 4, 3].into_iter().enumerate() {
                let want = i.powu((k * j) as u32);
                assert!((g.eval(chi, n) - want).norm() < 1e-15);
            }
            assert_eq!(g.eval(chi, 5), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn orthogonality() {
        for q in 1..=200u64 {
            let g = CharacterGroup::new(q).unwrap();
            let chars = g.characters();
            let phi = arith::euler_phi(q) as f64;
            for chi in &chars {
                let s: Complex64 = (0..q).map(|n| g.eval(chi, n)).sum();
                let want = if chi == &g.trivial() { phi } else { 0.0 };
                assert!((s - want).norm() < 1e-9, "q = {q}");
            }
            if q <= 50 {
                // Column relation: sum_chi chi(n) = phi(q) 1_{n = 1}.
                for n in 0..q {
                    let s: Complex64 = chars.iter().map(|c| g.eval(c, n)).sum();
                    let want = if n % q == 1 % q { phi } else { 0.0 };
                    assert!((s - want).norm() < 1e-12, "q = {q}, n = {n}");
                }
                for a in &chars {
                    for b in &chars {
                        let s: Complex64 = (0..q).map(|n| g.eval(a, n) * g.eval(b, n).conj()).sum();
                        let want = if a == b { phi } else { 0.0 };
                        assert!((s - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_and_periodic() {
        let g = CharacterGroup::new(72).unwrap();
        for chi in g.characters() {
            for m in 1..72u64 {
                for n in 1..72u64 {
                    let lhs = g.eval(&chi, m * n);
                    let rhs = g.eval(&chi, m) * g.eval(&chi, n);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
            assert_eq!(g.eval(&chi, 5), g.eval(&chi, 77));
        }
    }

    #[test]
    fn induced_count_is_phi_of_divisor() {
        for (q, d) in [(12u64, 4u64), (30, 6), (24, 2), (36, 4), (40, 8)] {
            let g = CharacterGroup::new(q).unwrap();
            let (ind, rest) = g.partition_by_induced(d).unwrap();
            assert_eq!(ind.len() as u64, arith::euler_phi(d), "q = {q}, d = {d}");
            assert_eq!((ind.len() + rest.len()) as u64, arith::euler_phi(q));
        }
    }
}
