//! The majorant `nu = nu♯ · nu♭` evaluated pointwise from the factorisation.

use std::sync::Arc;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::multfunc::{build_sieve_with, MultiplicativeFunction, SieveTable, SpfTable};

use super::cutoff::SmoothCutoff;
use super::divisor::{for_each_divisor, restricted_mobius_sum, truncated_divisor_sum_factored};
use super::split::{sharp_mobius_transform, split, SharpFlatSplit};

pub const DEFAULT_GAMMA: f64 = 0.25;
pub const DEFAULT_C1: f64 = 20.0;

/// Which form of the second `nu♭` sum to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlatForm {
    /// Prime `Q | n` only (`k = 1`); the `Q^k`, `k >= 2`, terms are left to `S`.
    #[default]
    Final,
    /// Keep the sum over all `Q^k | n`, as before the exceptional set absorbs them.
    PrimePowers,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorantParams {
    pub gamma: f64,
    pub c1: f64,
    pub flat_form: FlatForm,
}

impl Default for MajorantParams {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            c1: DEFAULT_C1,
            flat_form: FlatForm::Final,
        }
    }
}

impl MajorantParams {
    pub fn new(gamma: f64, c1: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in (0, 1/2), got {gamma}"
            )));
        }
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(Error::InvalidArgument(format!("C1 must be positive, got {c1}")));
        }
        Ok(Self {
            gamma,
            c1,
            flat_form: FlatForm::Final,
        })
    }

    pub fn with_flat_form(mut self, form: FlatForm) -> Self {
        self.flat_form = form;
        self
    }
}

/// One `(kappa, lambda)` block of `nu♯` beyond the base term: products of
/// `omega` distinct primes from `I_lambda = [lo, hi]` with `h♯(p) != 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct USetSpec {
    pub kappa: u32,
    pub lambda: u32,
    pub omega: u32,
    pub lo: f64,
    pub hi: f64,
}

/// `omega(lambda, kappa) = ceil(gamma kappa (lambda + 3 - log2 kappa) / 200)`.
pub fn u_set_omega(gamma: f64, kappa: u32, lambda: u32) -> u32 {
    let k = kappa as f64;
    (gamma * k * (lambda as f64 + 3.0 - k.log2()) / 200.0).ceil().max(0.0) as u32
}

/// Whether `n` (given by its factorisation) lies in the exceptional set `S`.
pub fn in_exceptional_set(fac: &[(u64, u32)], t: u64, params: &MajorantParams) -> bool {
    let log_t = (t as f64).ln();
    let loglog = log_t.ln();
    let small = (log_t / loglog.powi(3)).exp();
    let part_cap = params.gamma * log_t / loglog;
    let mut log_part = 0.0;
    for &(p, k) in fac {
        let lp = (p as f64).ln();
        if k >= 2 && k as f64 >= params.c1 * loglog / lp {
            return true;
        }
        if p as f64 <= small {
            log_part += k as f64 * lp;
        }
    }
    log_part >= part_cap
}

pub struct Majorant {
    pub params: MajorantParams,
    pub t: u64,
    pub split: SharpFlatSplit,
    h: SieveTable,
    sharp: SieveTable,
    flat: SieveTable,
    g: SieveTable,
    chi: SmoothCutoff,
    lambda: SmoothCutoff,
    log_t: f64,
    /// `H` of `h♯`.
    pub growth: f64,
    pub kappa0: u32,
    pub kappa_max: u32,
    pub lambda_max: u32,
    pub u_sets: Vec<USetSpec>,
    /// `x^{gamma/(log log T)^3}`, the lower bound for `Q` in `nu♭`.
    pub flat_q_floor: f64,
    /// Notes on degenerate parameter ranges at this `T`.
    pub audit: Vec<String>,
}

impl std::fmt::Debug for Majorant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Majorant")
            .field("function", &self.split.base.name())
            .field("t", &self.t)
            .field("params", &self.params)
            .field("kappa0", &self.kappa0)
            .field("u_sets", &self.u_sets)
            .finish()
    }
}

impl Majorant {
    pub fn new(h: &MultiplicativeFunction, t: u64, params: MajorantParams) -> Result<Self> {
        Self::with_spf(h, Arc::new(SpfTable::new(t)?), params)
    }

    /// Reuse an existing prime table; `T` is its limit.
    pub fn with_spf(h: &MultiplicativeFunction, spf: Arc<SpfTable>, params: MajorantParams) -> Result<Self> {
        let t = spf.limit();
        if t < 16 {
            return Err(Error::OutOfRange(format!(
                "majorant needs T >= 16 so that log log T > 1, got {t}"
            )));
        }
        let params = MajorantParams::new(params.gamma, params.c1)?.with_flat_form(params.flat_form);
        let split = split(h);
        let h_tbl = build_sieve_with(h, spf.clone())?;
        let sharp = build_sieve_with(&split.sharp, spf.clone())?;
        let flat = build_sieve_with(&split.flat, spf.clone())?;
        let g = build_sieve_with(&sharp_mobius_transform(&split), spf)?;
        let log_t = (t as f64).ln();
        let loglog3 = log_t.ln().powi(3);
        let gamma = params.gamma;
        let mut audit = Vec::new();

        let kappa0 = (4.0 / gamma - 1e-9).ceil() as u32;
        let lambda0 = ((kappa0 as f64).log2() - 2.0 - 1e-9).ceil().max(0.0) as u32;
        let kappa_top = loglog3.floor() as u32;
        let lambda_top = loglog3.log2().floor().max(0.0) as u32;
        if kappa_top < kappa0 || lambda_top < lambda0 {
            audit.push(format!(
                "T = {t}: [(log log T)^3] = {kappa_top}, [log2 (log log T)^3] = {lambda_top}; \
                 only the base term (kappa = {kappa0}, lambda = {lambda0}, u = 1) is kept"
            ));
        }
        let kappa_max = kappa_top.max(kappa0);
        let lambda_max = lambda_top.max(lambda0);
        let mut u_sets = Vec::new();
        for kappa in kappa0 + 1..=kappa_top {
            let lambda_lo = ((kappa as f64).log2() - 2.0 - 1e-9).ceil().max(0.0) as u32;
            if lambda_lo > lambda_top {
                audit.push(format!("T = {t}: kappa = {kappa} has an empty lambda range"));
            }
            for lambda in lambda_lo..=lambda_top {
                u_sets.push(USetSpec {
                    kappa,
                    lambda,
                    omega: u_set_omega(gamma, kappa, lambda).max(1),
                    lo: (log_t / 2f64.powi(lambda as i32 + 1)).exp(),
                    hi: (log_t / 2f64.powi(lambda as i32)).exp(),
                });
            }
        }
        let flat_q_floor = (gamma * log_t / loglog3).exp();
        Ok(Self {
            params,
            t,
            growth: split.sharp.growth(),
            split,
            h: h_tbl,
            sharp,
            flat,
            g,
            chi: SmoothCutoff::chi(),
            lambda: SmoothCutoff::lambda(gamma),
            log_t,
            kappa0,
            kappa_max,
            lambda_max,
            u_sets,
            flat_q_floor,
            audit,
        })
    }

    pub fn spf(&self) -> &Arc<SpfTable> {
        self.h.spf_table()
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.t {
            return Err(Error::OutOfRange(format!("n = {n} outside 1..={}", self.t)));
        }
        Ok(())
    }

    pub fn h_abs(&self, n: u64) -> f64 {
        self.h.get(n).abs()
    }

    pub fn h_signed(&self, n: u64) -> f64 {
        self.h.get(n)
    }

    pub fn g_table(&self) -> &SieveTable {
        &self.g
    }

    pub fn sharp_table(&self) -> &SieveTable {
        &self.sharp
    }

    pub fn flat_table(&self) -> &SieveTable {
        &self.flat
    }

    pub fn is_flat_prime(&self, p: u64) -> bool {
        self.flat.get(p) < 1.0
    }

    pub fn in_s(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(in_exceptional_set(&self.spf().factorize(n), self.t, &self.params))
    }

    pub fn truncated_divisor_sum(&self, m: u64) -> Result<f64> {
        self.check(m)?;
        Ok(self.h_gamma(&self.spf().factorize(m)))
    }

    fn h_gamma(&self, fac: &[(u64, u32)]) -> f64 {
        truncated_divisor_sum_factored(&self.g, fac, self.params.gamma * self.log_t, &self.chi)
    }

    pub fn nu_sharp(&self, n: u64) -> Result<f64> {
        self.check(n)?;
        let fac = self.spf().factorize(n);
        Ok(self.nu_sharp_factored(n, &fac, in_exceptional_set(&fac, self.t, &self.params)))
    }

    fn nu_sharp_factored(&self, n: u64, fac: &[(u64, u32)], in_s: bool) -> f64 {
        let mut total = self.growth.powi(self.kappa0 as i32) * self.h_gamma(fac);
        for us in &self.u_sets {
            let adm: SmallVec<[usize; 12]> = (0..fac.len())
                .filter(|&i| {
                    let p = fac[i].0 as f64;
                    p >= us.lo && p <= us.hi && self.sharp.get(fac[i].0) != 1.0
                })
                .collect();
            if adm.len() < us.omega as usize {
                continue;
            }
            let weight = self.growth.powi(us.kappa as i32);
            for_each_subset(&adm, us.omega as usize, &mut |chosen| {
                let hs: f64 = chosen.iter().map(|&i| self.sharp.get(fac[i].0)).product();
                let rest: SmallVec<[(u64, u32); 8]> =
                    (0..fac.len()).filter(|i| !chosen.contains(i)).map(|i| fac[i]).collect();
                total += weight * hs * self.h_gamma(&rest);
            });
        }
        if in_s {
            total += self.sharp.get(n);
        }
        total
    }

    pub fn nu_flat(&self, n: u64) -> Result<f64> {
        self.check(n)?;
        Ok(self.nu_flat_factored(&self.spf().factorize(n)))
    }

    fn nu_flat_factored(&self, fac: &[(u64, u32)]) -> f64 {
        let gamma = self.params.gamma;
        let log_x = self.log_t;
        let log_xg = gamma * log_x;
        let primes: SmallVec<[u64; 12]> = fac.iter().map(|e| e.0).collect();
        let logs: SmallVec<[f64; 12]> = primes.iter().map(|&p| (p as f64).ln()).collect();
        let exps: SmallVec<[u32; 12]> = fac.iter().map(|e| e.1).collect();
        let flat: SmallVec<[bool; 12]> = primes.iter().map(|&p| self.is_flat_prime(p)).collect();

        // sigma♭(Q; n/d) with `used` the exponents of d.
        let sigma = |log_q: f64, used: &[u32]| -> f64 {
            let ls: SmallVec<[f64; 12]> = (0..primes.len())
                .filter(|&i| flat[i] && exps[i] > used[i])
                .map(|i| logs[i])
                .collect();
            restricted_mobius_sum(&ls, log_q, &self.chi).powi(2)
        };

        let mut total = 0.0;
        let flat_exps: SmallVec<[u32; 12]> = (0..primes.len()).map(|i| if flat[i] { exps[i] } else { 0 }).collect();
        for_each_divisor(&primes, &logs, &flat_exps, log_xg, &mut |m, lm, used| {
            let w = self.flat.get(m) * self.chi.eval(lm / log_xg);
            if w != 0.0 {
                total += w * sigma(log_xg, used);
            }
        });

        let log_floor = self.flat_q_floor.ln();
        for q in 0..primes.len() {
            if logs[q] <= log_floor {
                continue;
            }
            let log_q = logs[q];
            let k_max = match self.params.flat_form {
                FlatForm::Final => 1,
                FlatForm::PrimePowers => exps[q],
            };
            let mut qk = 1u64;
            for k in 1..=k_max {
                qk *= primes[q];
                let hq = self.flat.get(qk);
                if hq == 0.0 {
                    continue;
                }
                let log_qk = k as f64 * log_q;
                // m | n built from the primes below Q.
                let mut inner = 0.0;
                for_each_divisor(
                    &primes[..q],
                    &logs[..q],
                    &exps[..q],
                    4.0 * log_xg - log_qk,
                    &mut |m, lm, used| {
                        let w = self.flat.get(m) * self.lambda.eval((log_qk + lm) / log_x);
                        if w != 0.0 {
                            let mut all: SmallVec<[u32; 12]> = SmallVec::from_slice(used);
                            all.push(k);
                            all.resize(primes.len(), 0);
                            inner += w * sigma(log_q, &all);
                        }
                    },
                );
                total += hq * inner;
            }
        }
        total
    }

    /// `(nu♯(n), nu♭(n), n ∈ S)`.
    pub fn evaluate(&self, n: u64) -> Result<MajorantValue> {
        self.check(n)?;
        let fac = self.spf().factorize(n);
        let in_s = in_exceptional_set(&fac, self.t, &self.params);
        Ok(MajorantValue {
            n,
            h_abs: self.h_abs(n),
            nu_sharp: self.nu_sharp_factored(n, &fac, in_s),
            nu_flat: self.nu_flat_factored(&fac),
            in_s,
        })
    }

    pub fn nu(&self, n: u64) -> Result<f64> {
        let v = self.evaluate(n)?;
        Ok(v.nu_sharp * v.nu_flat)
    }

    /// `evaluate` over `lo..=hi`, in order.
    pub fn scan(&self, lo: u64, hi: u64) -> Result<Vec<MajorantValue>> {
        self.check(lo.max(1))?;
        self.check(hi)?;
        (lo.max(1)..=hi).into_par_iter().map(|n| self.evaluate(n)).collect()
    }

    /// `nu(n)` for `n = 0..=T`, slot 0 holding 0, in the layout of
    /// [`SieveTable::values`].
    pub fn table(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.t as usize + 1];
        out[1..].par_iter_mut().enumerate().for_each(|(i, slot)| {
            let n = i as u64 + 1;
            let fac = self.spf().factorize(n);
            let in_s = in_exceptional_set(&fac, self.t, &self.params);
            *slot = self.nu_sharp_factored(n, &fac, in_s) * self.nu_flat_factored(&fac);
        });
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorantValue {
    pub n: u64,
    pub h_abs: f64,
    pub nu_sharp: f64,
    pub nu_flat: f64,
    pub in_s: bool,
}

fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut SmallVec<[usize; 12]>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut SmallVec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::majorant::divisor::sigma_flat;

    #[test]
    fn params_validation() {
        assert!(MajorantParams::new(0.5, 20.0).is_err());
        assert!(MajorantParams::new(0.0, 20.0).is_err());
        assert!(MajorantParams::new(0.25, 20.0).is_ok());
        assert!(Majorant::new(&MultiplicativeFunction::all_one(), 10, MajorantParams::default()).is_err());
    }

    #[test]
    fn omega_formula() {
        // gamma = 1/4, kappa = 17, lambda = 3: ceil(0.25 * 17 * (6 - log2 17) / 200) = 1.
        assert_eq!(u_set_omega(0.25, 17, 3), 1);
        assert_eq!(u_set_omega(0.25, 400, 10), 3);
    }

    #[test]
    fn exceptional_set_clauses() {
        let p = MajorantParams::default();
        let t = 1_000_000u64;
        // Clause 1 at p = 2 needs k >= 20 log log T / log 2 ≈ 75.8, beyond u64.
        // With C1 = 1 and p = 3 it needs k >= 2.39.
        let weak = MajorantParams::new(0.25, 1.0).unwrap();
        assert!(in_exceptional_set(&arith::factorize(27 * 101), t, &weak));
        assert!(!in_exceptional_set(&arith::factorize(9 * 101), t, &weak));
        assert!(!in_exceptional_set(&arith::factorize(27 * 101), t, &p));
        // Squarefree with large prime factors.
        assert!(!in_exceptional_set(&arith::factorize(101 * 103), t, &p));
        // Clause 2: the 2-part (2 is the only prime <= T^{1/(log log T)^3})
        // must reach T^{gamma / log log T} ≈ 3.72.
        assert!(in_exceptional_set(&arith::factorize(4 * 101), t, &p));
        assert!(!in_exceptional_set(&arith::factorize(2 * 101), t, &p));
    }

    #[test]
    fn bounded_function_collapses_nu_sharp() {
        let m = Majorant::new(
            &MultiplicativeFunction::two_squares(),
            10_000,
            MajorantParams::default(),
        )
        .unwrap();
        assert_eq!(m.growth, 1.0);
        for n in 1..=10_000 {
            let v = m.evaluate(n).unwrap();
            assert_eq!(v.nu_sharp, if v.in_s { 2.0 } else { 1.0 }, "n = {n}");
        }
    }

    #[test]
    fn all_one_gives_unit_nu_flat() {
        let m = Majorant::new(&MultiplicativeFunction::all_one(), 10_000, MajorantParams::default()).unwrap();
        // P♭ is empty: the first sum is the single term m = 1.
        for n in 1..=10_000 {
            assert!(m.nu_flat(n).unwrap() >= 1.0);
        }
        assert_eq!(m.nu_flat(1).unwrap(), 1.0);
    }

    /// `nu♭` by brute force over all divisor pairs.
    fn nu_flat_oracle(m: &Majorant, n: u64) -> f64 {
        let x = m.t as f64;
        let gamma = m.params.gamma;
        let chi = SmoothCutoff::chi();
        let lam = SmoothCutoff::lambda(gamma);
        let flat = |p: u64| m.is_flat_prime(p);
        let fac_of = |k: u64| arith::factorize(k);
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let mut total = 0.0;
        for &d in &divisors {
            if fac_of(d).iter().all(|&(p, _)| flat(p)) {
                let w = m.flat_table().get(d) * chi.eval((d as f64).ln() / (gamma * x.ln()));
                total += w * sigma_flat(x.powf(gamma), n / d, flat, &chi).unwrap();
            }
        }
        for &(q, v) in fac_of(n).iter() {
            if (q as f64) <= m.flat_q_floor {
                continue;
            }
            let k_max = if m.params.flat_form == FlatForm::Final { 1 } else { v };
            for qk in (1..=k_max).map(|k| q.pow(k)) {
                for &d in &divisors {
                    if (n / qk) % d != 0 || fac_of(d).iter().any(|&(p, _)| p >= q) {
                        continue;
                    }
                    let w = m.flat_table().get(qk * d) * lam.eval(((qk * d) as f64).ln() / x.ln());
                    total += w * sigma_flat(q as f64, n / (qk * d), flat, &chi).unwrap();
                }
            }
        }
        total
    }

    #[test]
    fn nu_flat_matches_brute_force() {
        for h in [
            MultiplicativeFunction::two_squares(),
            MultiplicativeFunction::delta_omega(0.5).unwrap(),
            MultiplicativeFunction::abs_lambda_delta(5000).unwrap(),
        ] {
            for form in [FlatForm::Final, FlatForm::PrimePowers] {
                let m = Majorant::new(&h, 5000, MajorantParams::default().with_flat_form(form)).unwrap();
                for n in 1..=5000 {
                    let got = m.nu_flat(n).unwrap();
                    let want = nu_flat_oracle(&m, n);
                    assert!(
                        (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                        "{} n = {n}: {got} vs {want}",
                        h.name()
                    );
                    assert!(got >= 0.0);
                }
            }
        }
    }

    #[test]
    fn divisor_function_sharp_domination() {
        // gamma = 0.45 keeps kappa0 = 9 below [(log log T)^3] = 10 at T = 10^4.
        let params = MajorantParams::new(0.45, 20.0).unwrap();
        let m = Majorant::new(&MultiplicativeFunction::divisor_d(), 10_000, params).unwrap();
        assert_eq!(
            m.u_sets.iter().map(|u| (u.kappa, u.lambda)).collect::<Vec<_>>(),
            vec![(10, 2), (10, 3)]
        );
        let mut c = f64::INFINITY;
        for n in 1..=10_000 {
            let v = m.nu_sharp(n).unwrap();
            assert!(v > 0.0);
            c = c.min(v / arith::number_of_divisors(&arith::factorize(n)) as f64);
        }
        assert!(c > 0.0 && c.is_finite());
    }

    #[test]
    fn table_matches_pointwise() {
        let m = Majorant::new(
            &MultiplicativeFunction::abs_lambda_delta(3000).unwrap(),
            3000,
            MajorantParams::default(),
        )
        .unwrap();
        let tbl = m.table();
        for n in [1u64, 2, 97, 360, 2999] {
            assert_eq!(tbl[n as usize], m.nu(n).unwrap());
        }
    }
}
