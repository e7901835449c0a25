//! One runner per experiment kind.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::charsum::{bracket_coefficients, major_arc_probe, restricted_identity_check, CharacterGroup};
use crate::error::{Error, Result};
use crate::linsys::{correlation_sum, form_ranges, format_point, ConvexBody, LinearForm, LinearSystem, Scale};
use crate::localdensity::{
    alpha_composite, beta_p, beta_p_exact, effective_a_max, predict_main_term_corollary, predict_main_term_theorem,
};
use crate::majorant::{
    domination_scan, exceptional_set_density, fit_envelope_constant, linear_forms_ratio, majorant_average_order,
    Majorant,
};
use crate::multfunc::{
    build_sieve, mean_value, resolve, sato_tate_mean, sato_tate_mu, shiu_upper_bound, tau, MultiplicativeFunction,
    SieveTable,
};
use crate::wtrick::{exact_smooth_partition, exceptional_square_density, make_wcontext, stability_scan};

use super::config::{ExperimentConfig, PMaxSpec};
use super::report::{num, Report, Table};

/// Experiment kinds understood by the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Sieve,
    Correlate,
    PredictCorollary,
    PredictTheorem,
    Partition,
    MajorantScan,
    LinearFormsRatio,
    CharIdentity,
    StabilityScan,
    SatoTate,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::Sieve,
        Kind::Correlate,
        Kind::PredictCorollary,
        Kind::PredictTheorem,
        Kind::Partition,
        Kind::MajorantScan,
        Kind::LinearFormsRatio,
        Kind::CharIdentity,
        Kind::StabilityScan,
        Kind::SatoTate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Sieve => "sieve",
            Kind::Correlate => "correlate",
            Kind::PredictCorollary => "predict-corollary",
            Kind::PredictTheorem => "predict-theorem",
            Kind::Partition => "partition",
            Kind::MajorantScan => "majorant-scan",
            Kind::LinearFormsRatio => "linear-forms-ratio",
            Kind::CharIdentity => "char-identity",
            Kind::StabilityScan => "stability-scan",
            Kind::SatoTate => "sato-tate",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
            Error::InvalidArgument(format!(
                "unknown experiment kind `{s}` (expected one of {})",
                names.join(", ")
            ))
        })
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn execute(kind: Kind, cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new(kind.name());
    match kind {
        Kind::Sieve => sieve(cfg, &mut rep)?,
        Kind::Correlate => correlate(cfg, &mut rep)?,
        Kind::PredictCorollary => predict_corollary(cfg, &mut rep)?,
        Kind::PredictTheorem => predict_theorem(cfg, &mut rep)?,
        Kind::Partition => partition(cfg, &mut rep)?,
        Kind::MajorantScan => majorant_scan(cfg, &mut rep)?,
        Kind::LinearFormsRatio => forms_ratio(cfg, &mut rep)?,
        Kind::CharIdentity => char_identity(cfg, &mut rep)?,
        Kind::StabilityScan => stability(cfg, &mut rep)?,
        Kind::SatoTate => sato_tate(cfg, &mut rep)?,
    }
    Ok(rep)
}

fn with_context<T>(what: impl FnOnce() -> String, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InvalidArgument(format!("{}: {e}", what())))
}

fn sieve(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let grid = cfg.require_grid()?;
    let names = cfg.require_functions()?;
    let top = *grid.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = Table::new(
        "main",
        &[
            "function",
            "T:count",
            "mean:1",
            "shiu_envelope:1",
            "mean_over_envelope:1",
        ],
    );
    for name in names {
        let f = resolve(name, top)?;
        let tbl = with_context(|| format!("sieve {name} to {top}"), build_sieve(&f, top))?;
        for &t in grid {
            let m = mean_value(&tbl, t)?;
            let env = shiu_upper_bound(&tbl, t, 1)?;
            table.push(vec![name.clone(), t.to_string(), num(m), num(env), num(m / env)]);
        }
        let (mut worst_eval, mut worst_mult) = (0.0f64, 0.0f64);
        for _ in 0..cfg.multfunc.spot_checks {
            let n = rng.gen_range(1..=top);
            let direct = f.eval(n)?;
            worst_eval = worst_eval.max((tbl.get(n) - direct).abs() / direct.abs().max(1.0));
            let m = rng.gen_range(1..=top);
            let k = rng.gen_range(1..=(top / m).max(1));
            if m * k <= top && arith::gcd(m, k) == 1 {
                let prod = tbl.get(m) * tbl.get(k);
                worst_mult = worst_mult.max((tbl.get(m * k) - prod).abs() / prod.abs().max(1.0));
            }
        }
        rep.check(
            format!("{name}: table agrees with direct evaluation"),
            worst_eval <= cfg.assert.rel_tol,
            format!(
                "max relative error {worst_eval:e} over {} random n",
                cfg.multfunc.spot_checks
            ),
        );
        rep.check(
            format!("{name}: multiplicative on coprime pairs"),
            worst_mult <= cfg.assert.rel_tol,
            format!("max relative error {worst_mult:e}"),
        );
    }
    rep.tables.push(table);

    let n = cfg.multfunc.tau_check;
    if n > 0 {
        let taus = tau::tau_coefficients(n.max(6) as usize);
        let at = |k: u64| &taus[k as usize - 1];
        rep.check(
            "tau(2) = -24",
            *at(2) == BigInt::from(-24),
            format!("tau(2) = {}", at(2)),
        );
        rep.check(
            "tau(6) = tau(2) tau(3)",
            *at(6) == at(2) * at(3),
            format!("tau(6) = {}", at(6)),
        );
        let bad: Vec<u64> = (1..=n).filter(|&k| !tau::deligne_holds(k, at(k))).collect();
        rep.check(
            format!("Deligne bound for n <= {n}"),
            bad.is_empty(),
            format!(
                "{} violations{}",
                bad.len(),
                bad.first().map(|k| format!(", first at {k}")).unwrap_or_default()
            ),
        );
        let mut tt = Table::new("tau", &["n:count", "tau:1", "normalized:1"]);
        for k in [1u64, 2, 3, 4, 5, 6, 7, 11, 13, n] {
            if k <= n {
                tt.push(vec![k.to_string(), at(k).to_string(), num(tau::normalized(k, at(k)))]);
            }
        }
        rep.tables.push(tt);
    }
    Ok(())
}

/// Largest value of any form over the dilated body; errors when some form
/// leaves the positive integers.
fn table_length(sys: &LinearSystem, body: &ConvexBody, scale: Scale) -> Result<u64> {
    let ranges = form_ranges(sys, body, scale).ok_or_else(|| Error::InvalidArgument("empty body".into()))?;
    let mut top = 1u64;
    for (i, ((lo, at), (hi, _))) in ranges.iter().enumerate() {
        if lo < &BigRational::one() {
            return Err(Error::FormRange {
                form: i,
                value: lo.floor().to_integer().to_i128().unwrap_or(i128::MIN),
                point: format_point(at),
                lo: 1,
                hi: i128::MAX,
            });
        }
        let h = hi
            .floor()
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("form {i} range")))?;
        top = top.max(h);
    }
    Ok(top.max(16))
}

struct Tables {
    fs: Vec<MultiplicativeFunction>,
    tbls: Vec<SieveTable>,
    /// Index into `tbls` for every form.
    slot: Vec<usize>,
}

impl Tables {
    fn build(names: &[String], len: u64) -> Result<Self> {
        let mut by_name: BTreeMap<&str, usize> = BTreeMap::new();
        let mut fs = Vec::new();
        let mut tbls = Vec::new();
        let mut slot = Vec::new();
        for name in names {
            let f = resolve(name, len)?;
            let i = match by_name.get(name.as_str()) {
                Some(&i) => i,
                None => {
                    tbls.push(with_context(|| format!("sieve {name} to {len}"), build_sieve(&f, len))?);
                    by_name.insert(name, tbls.len() - 1);
                    tbls.len() - 1
                }
            };
            fs.push(f);
            slot.push(i);
        }
        Ok(Self { fs, tbls, slot })
    }

    fn refs(&self) -> Vec<&SieveTable> {
        self.slot.iter().map(|&i| &self.tbls[i]).collect()
    }
}

fn correlate(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ls = cfg.linsys()?;
    let sys = ls.system()?;
    let names = cfg.functions_per_form()?;
    let all_one = names.iter().all(|n| n == "all_one");
    let mut table = Table::new("main", &["T:count", "raw_sum:1", "lattice_count:count", "average:1"]);
    for &t in cfg.require_grid()? {
        let body = ls.body(t)?;
        let len = table_length(&sys, &body, Scale::integer(t)?)?;
        let tabs = Tables::build(&names, len)?;
        let res = with_context(
            || format!("correlation at T = {t}"),
            correlation_sum(&tabs.refs(), &sys, &body, t),
        )?;
        table.push(vec![
            t.to_string(),
            num(res.raw_sum),
            res.lattice_count.to_string(),
            num(res.average()),
        ]);
        if all_one {
            rep.check(
                format!("T = {t}: all-one sum equals the lattice count"),
                res.raw_sum == res.lattice_count as f64,
                format!("raw_sum = {}, lattice_count = {}", res.raw_sum, res.lattice_count),
            );
        }
    }
    rep.tables.push(table);
    Ok(())
}

fn resolve_p_max(spec: &PMaxSpec, t: u64) -> Result<u64> {
    Ok(match spec {
        PMaxSpec::Fixed(p) => *p,
        PMaxSpec::Named(s) if s == "T" => t,
        PMaxSpec::Named(_) => {
            let w = make_wcontext(t, &Default::default())?.w_of_x;
            *arith::primes_up_to(w.floor() as u64).last().unwrap_or(&2)
        }
    })
}

/// Ratios across the grid: within range at the last point, and consecutive
/// changes shrinking.
fn ratio_trend_checks(rep: &mut Report, cfg: &ExperimentConfig, label: &str, ts: &[u64], ratios: &[f64]) {
    let (lo, hi) = (cfg.assert.ratio_min, cfg.assert.ratio_max);
    if let (Some(&t), Some(&r)) = (ts.last(), ratios.last()) {
        rep.check(
            format!("{label}: ratio at T = {t} within [{lo:.4}, {hi:.4}]"),
            (lo..=hi).contains(&r),
            format!("ratio = {r:.6}"),
        );
    }
    if ratios.len() >= 3 {
        let drifts: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        rep.check(
            format!("{label}: drift shrinking across the grid"),
            drifts.windows(2).all(|w| w[1] < w[0]),
            format!(
                "successive |change| = {:?}",
                drifts.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()
            ),
        );
    }
}

fn predict_corollary(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ld = &cfg.localdensity;
    if cfg.linsys.is_some() && !cfg.grid.t.is_empty() {
        let ls = cfg.linsys()?;
        let sys = ls.system()?;
        let names = cfg.functions_per_form()?;
        let mut table = Table::new(
            "main",
            &[
                "T:count",
                "p_max:count",
                "empirical:1",
                "beta_infinity:1",
                "beta_product:1",
                "prediction:1",
                "ratio:1",
            ],
        );
        let mut ratios = Vec::new();
        for &t in &cfg.grid.t {
            let body = ls.body(t)?;
            let len = table_length(&sys, &body, Scale::integer(t)?)?;
            let tabs = Tables::build(&names, len)?;
            let refs = tabs.refs();
            let emp = correlation_sum(&refs, &sys, &body, t)?;
            let p_max = resolve_p_max(&ld.p_max, t)?;
            let pred = predict_main_term_corollary(&sys, &tabs.fs, &refs, &body, t, ld.a_max, p_max)?;
            let ratio = emp.raw_sum / pred.prediction;
            ratios.push(ratio);
            table.push(vec![
                t.to_string(),
                pred.p_max.to_string(),
                num(emp.raw_sum),
                num(pred.beta_infinity),
                num(pred.product),
                num(pred.prediction),
                num(ratio),
            ]);
        }
        rep.tables.push(table);
        ratio_trend_checks(rep, cfg, "empirical / predicted", &cfg.grid.t, &ratios);
    }
    if !ld.closed_form_primes.is_empty() {
        closed_form_check(cfg, rep)?;
    }
    if ld.alpha_systems > 0 {
        alpha_check(cfg, rep)?;
    }
    Ok(())
}

fn closed_form_check(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ident = LinearSystem::new(1, vec![LinearForm::new(vec![1], 0)?])?;
    let one = [MultiplicativeFunction::all_one()];
    let mut table = Table::new(
        "beta",
        &["p:count", "a_max:count", "beta_p:1", "closed_form:1", "exact_match:1"],
    );
    for &p in &cfg.localdensity.closed_form_primes {
        let a = effective_a_max(p, cfg.localdensity.a_max);
        let exact = beta_p_exact(&ident, &one, p, a)?;
        // Truncating at A leaves (p/(p+1)) (1 - p^{-(A+1)}).
        let pb = BigInt::from(p);
        let tail = BigRational::new(BigInt::one(), num_traits::pow(pb.clone(), a as usize + 1));
        let closed = BigRational::new(pb.clone(), pb + 1) * (BigRational::one() - tail);
        let float = beta_p(&ident, &one, p, a)?;
        let limit = p as f64 / (p as f64 + 1.0);
        let ok = exact == closed && (float.value - limit).abs() <= float.tail_bound + 1e-15;
        table.push(vec![
            p.to_string(),
            a.to_string(),
            num(float.value),
            num(limit),
            (exact == closed).to_string(),
        ]);
        rep.check(
            format!("beta_{p} = (1 + 1/{p})^-1 for all-one, phi(n) = n"),
            ok,
            format!(
                "truncated at A = {a}: exact rational match = {}, |beta - limit| = {:e}",
                exact == closed,
                (float.value - limit).abs()
            ),
        );
    }
    rep.tables.push(table);
    Ok(())
}

/// Random systems with `s <= 2`, `r <= 3`, small coefficients.
fn random_system(rng: &mut impl Rng) -> LinearSystem {
    loop {
        let s = rng.gen_range(1..=2usize);
        let r = rng.gen_range(1..=3usize);
        let forms: Option<Vec<LinearForm>> = (0..r)
            .map(|_| {
                let coeffs: Vec<i64> = (0..s).map(|_| rng.gen_range(-4..=4)).collect();
                LinearForm::new(coeffs, rng.gen_range(-6..=6)).ok()
            })
            .collect();
        if let Some(sys) = forms.and_then(|f| LinearSystem::allowing_dependence(s, f).ok()) {
            return sys;
        }
    }
}

/// `#{v mod L : d_j | phi_j(v)} / L^s` by scanning every residue vector.
pub fn alpha_by_residue_scan(sys: &LinearSystem, moduli: &[u64]) -> BigRational {
    let l = moduli.iter().fold(1u64, |a, &d| arith::lcm(a, d));
    let s = sys.dim();
    let total = l.pow(s as u32);
    let mut v = vec![0i64; s];
    let mut count = 0u64;
    for idx in 0..total {
        let mut k = idx;
        for x in v.iter_mut() {
            *x = (k % l) as i64;
            k /= l;
        }
        let vals = sys.eval_all(&v).expect("small values");
        if vals.iter().zip(moduli).all(|(&x, &d)| x.rem_euclid(d as i128) == 0) {
            count += 1;
        }
    }
    BigRational::new(count.into(), total.into())
}

fn alpha_check(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    const TUPLES: usize = 16;
    let ld = &cfg.localdensity;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa1fa);
    let mut table = Table::new(
        "alpha",
        &["system:count", "s:count", "r:count", "tuples:count", "mismatches:count"],
    );
    let mut mismatches = 0;
    for idx in 0..ld.alpha_systems {
        let sys = random_system(&mut rng);
        let mut bad = 0;
        for _ in 0..TUPLES {
            let moduli: Vec<u64> = loop {
                let m: Vec<u64> = (0..sys.len()).map(|_| rng.gen_range(1..=30u64)).collect();
                if m.iter().fold(1u64, |a, &d| arith::lcm(a, d)) <= ld.alpha_lcm_max {
                    break m;
                }
            };
            if alpha_composite(&sys, &moduli)? != alpha_by_residue_scan(&sys, &moduli) {
                bad += 1;
            }
        }
        mismatches += bad;
        table.push(vec![
            idx.to_string(),
            sys.dim().to_string(),
            sys.len().to_string(),
            TUPLES.to_string(),
            bad.to_string(),
        ]);
    }
    rep.tables.push(table);
    rep.check(
        format!("alpha multiplicativity vs residue scan, lcm <= {}", ld.alpha_lcm_max),
        mismatches == 0,
        format!(
            "{mismatches} mismatches over {} systems x {TUPLES} modulus tuples",
            ld.alpha_systems
        ),
    );
    Ok(())
}

fn predict_theorem(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ls = cfg.linsys()?;
    let sys = ls.system()?;
    let names = cfg.functions_per_form()?;
    let mut table = Table::new(
        "main",
        &[
            "T:count",
            "W_tilde:count",
            "empirical:1",
            "prediction:1",
            "tuples:count",
            "ratio:1",
        ],
    );
    let mut ratios = Vec::new();
    let grid = cfg.require_grid()?;
    for &t in grid {
        let body = ls.body(t)?;
        let len = table_length(&sys, &body, Scale::integer(t)?)?;
        let tabs = Tables::build(&names, len)?;
        let refs = tabs.refs();
        let emp = correlation_sum(&refs, &sys, &body, t)?;
        let wctx = make_wcontext(t, &cfg.w_overrides())?;
        let pred = predict_main_term_theorem(&sys, &tabs.fs, &refs, &body, &wctx, t)?;
        let ratio = emp.raw_sum / pred.value;
        ratios.push(ratio);
        table.push(vec![
            t.to_string(),
            pred.w_tilde.to_string(),
            num(emp.raw_sum),
            num(pred.value),
            pred.tuples.to_string(),
            num(ratio),
        ]);
    }
    rep.tables.push(table);
    ratio_trend_checks(rep, cfg, "empirical / theorem main term", grid, &ratios);
    Ok(())
}

fn partition(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ls = cfg.linsys()?;
    let sys = ls.system()?;
    let names = cfg.functions_per_form()?;
    let mut table = Table::new(
        "main",
        &[
            "T:count",
            "groups:count",
            "partition_total:1",
            "correlation_sum:1",
            "relative_difference:1",
            "truncated_mass:1",
        ],
    );
    for &t in cfg.require_grid()? {
        let body = ls.body(t)?;
        let len = table_length(&sys, &body, Scale::integer(t)?)?;
        let tabs = Tables::build(&names, len)?;
        let refs = tabs.refs();
        let wctx = make_wcontext(t, &cfg.w_overrides())?;
        let part = exact_smooth_partition(&refs, &sys, &body, t, &wctx)?;
        let corr = correlation_sum(&refs, &sys, &body, t)?;
        let rel = (part.total - corr.raw_sum).abs() / corr.raw_sum.abs().max(1.0);
        table.push(vec![
            t.to_string(),
            part.groups.len().to_string(),
            num(part.total),
            num(corr.raw_sum),
            num(rel),
            num(part.truncated_mass),
        ]);
        rep.check(
            format!("T = {t}: smooth partition reproduces the correlation sum"),
            rel <= cfg.assert.rel_tol && part.lattice_count == corr.lattice_count,
            format!("relative difference {rel:e}, {} groups", part.groups.len()),
        );
    }
    rep.tables.push(table);
    Ok(())
}

fn majorant_scan(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let params = cfg.majorant_params()?;
    let mj = &cfg.majorant;
    let grid = cfg.require_grid()?;
    let mut dom = Table::new(
        "main",
        &[
            "function",
            "T:count",
            "max_ratio:1",
            "argmax:count",
            "in_S:count",
            "uncovered:count",
        ],
    );
    let mut avg = Table::new(
        "average_order",
        &[
            "function",
            "T:count",
            "S_h:1",
            "S_nu:1",
            "envelope:1",
            "lower_ratio:1",
            "upper_ratio:1",
        ],
    );
    let mut exc = Table::new(
        "exceptional",
        &[
            "function",
            "T:count",
            "S_density:1",
            "S_envelope:1",
            "square_density:1",
            "square_bound:1",
        ],
    );
    for name in cfg.require_functions()? {
        let top = grid.iter().chain(&mj.domination_t).copied().max().unwrap_or(16);
        let f = resolve(name, top)?;
        let mut maxima = Vec::new();
        for &t in &mj.domination_t {
            let m = Majorant::new(&f, t, params.clone())?;
            let d = domination_scan(&m)?;
            maxima.push(d.max_ratio);
            dom.push(vec![
                name.clone(),
                t.to_string(),
                num(d.max_ratio),
                d.argmax.to_string(),
                d.exceptional.to_string(),
                d.uncovered.to_string(),
            ]);
        }
        if !maxima.is_empty() {
            let finite = maxima.iter().all(|r| r.is_finite());
            let steady = maxima
                .windows(2)
                .all(|w| w[0].max(w[1]) < mj_variation(cfg) * w[0].min(w[1]));
            rep.check(
                format!("{name}: |h|/(nu_sharp nu_flat) off S finite and stable between grids"),
                finite && steady,
                format!(
                    "maxima {:?} on T = {:?}",
                    maxima.iter().map(|r| format!("{r:.4e}")).collect::<Vec<_>>(),
                    mj.domination_t
                ),
            );
        }
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut densities = Vec::new();
        let mut squares = Vec::new();
        for &t in grid {
            let m = Majorant::new(&f, t, params.clone())?;
            let wctx = make_wcontext(t, &cfg.w_overrides())?;
            let a = majorant_average_order(&m, wctx.w_of_x, mj.w_tilde, mj.a)?;
            lower.push(a.lower_ratio);
            upper.push(a.upper_ratio);
            avg.push(vec![
                name.clone(),
                t.to_string(),
                num(a.s_h),
                num(a.s_nu),
                num(a.envelope),
                num(a.lower_ratio),
                num(a.upper_ratio),
            ]);
            densities.push(exceptional_set_density(&m));
            squares.push(exceptional_square_density(m.spf(), t, wctx.c)?);
        }
        let kappa = fit_envelope_constant(&densities);
        for (d, sq) in densities.iter().zip(&squares) {
            exc.push(vec![
                name.clone(),
                d.t.to_string(),
                num(d.density),
                num(kappa * d.unit_envelope),
                num(sq.density),
                num(sq.union_bound),
            ]);
        }
        let spread = |v: &[f64]| {
            let hi = v.iter().copied().fold(f64::MIN, f64::max);
            let lo = v.iter().copied().fold(f64::MAX, f64::min);
            hi / lo
        };
        let (sl, su) = (spread(&lower), spread(&upper));
        rep.check(
            format!("{name}: average-order ratios within 3x across the grid"),
            sl <= 3.0 && su <= 3.0 && lower.iter().chain(&upper).all(|r| r.is_finite() && *r > 0.0),
            format!("lower ratio spread {sl:.3}, upper ratio spread {su:.3}"),
        );
        let last = densities.last().unwrap();
        rep.check(
            format!("{name}: S density at T = {} below the fitted envelope", last.t),
            last.density <= kappa * last.unit_envelope * (1.0 + 1e-12),
            format!(
                "density {:.6}, envelope {:.6} (kappa' fitted on the grid)",
                last.density,
                kappa * last.unit_envelope
            ),
        );
        let sq = squares.last().unwrap();
        rep.check(
            format!(
                "{name}: square-divisor set density at T = {} below the zeta-tail bound",
                sq.t
            ),
            sq.density <= sq.union_bound,
            format!("density {:.6}, bound {:.6}", sq.density, sq.union_bound),
        );
    }
    rep.tables.extend([dom, avg, exc]);
    Ok(())
}

fn mj_variation(cfg: &ExperimentConfig) -> f64 {
    cfg.assert.max_variation
}

fn forms_ratio(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let ls = cfg.linsys()?;
    let sys = ls.system()?;
    let names = cfg.functions_per_form()?;
    let params = cfg.majorant_params()?;
    let grid = cfg.require_grid()?;
    let r = sys.len();
    let mut table = Table::new(
        "main",
        &[
            "T:count",
            "W:count",
            "joint:1",
            "marginal_product:1",
            "ratio:1",
            "lattice_count:count",
        ],
    );
    let mut ratios = Vec::new();
    for &t in grid {
        let body = ls.body(t)?;
        let w_default = make_wcontext(t, &cfg.w_overrides())?.w;
        let ws: Vec<u64> = if ls.w.is_empty() {
            vec![w_default; r]
        } else {
            ls.w.clone()
        };
        let a_list: Vec<i64> = if ls.a.is_empty() { vec![1; r] } else { ls.a.clone() };
        let mut cache: BTreeMap<(String, u64), Vec<f64>> = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            let top = ws[i] * t + a_list[i].max(0) as u64;
            let key = (name.clone(), top);
            if !cache.contains_key(&key) {
                let f = resolve(name, top)?;
                let m = with_context(
                    || format!("majorant for {name} at {top}"),
                    Majorant::new(&f, top, params.clone()),
                )?;
                cache.insert(key, m.table());
            }
        }
        let nus: Vec<&[f64]> = names
            .iter()
            .enumerate()
            .map(|(i, name)| cache[&(name.clone(), ws[i] * t + a_list[i].max(0) as u64)].as_slice())
            .collect();
        let res = linear_forms_ratio(&nus, &sys, &body, t, &ws, &a_list)?;
        ratios.push(res.ratio);
        table.push(vec![
            t.to_string(),
            ws.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
            num(res.joint),
            num(res.marginals.iter().product()),
            num(res.ratio),
            res.lattice_count.to_string(),
        ]);
    }
    rep.tables.push(table);
    let (lo, hi) = (cfg.assert.ratio_min, cfg.assert.ratio_max);
    let last = *ratios.last().unwrap();
    rep.check(
        format!("ratio at T = {} within [{lo:.4}, {hi:.4}]", grid.last().unwrap()),
        (lo..=hi).contains(&last),
        format!("ratio = {last:.6}"),
    );
    if ratios.len() >= 2 {
        let first = (ratios[0] - 1.0).abs();
        rep.check(
            format!("every later grid point closer to 1 than T = {}", grid[0]),
            ratios[1..].iter().all(|r| (r - 1.0).abs() < first),
            format!(
                "ratios {:?}",
                ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>()
            ),
        );
    }
    Ok(())
}

fn char_identity(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let cs = &cfg.charsum;
    let names = cfg.require_functions()?;
    let y_top = cs.tuples.iter().map(|t| t[3]).chain([cs.y_max]).max().unwrap();
    let tbls: Vec<SieveTable> = names
        .iter()
        .map(|n| build_sieve(&resolve(n, y_top)?, y_top))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases: Vec<(usize, [u64; 4])> = Vec::new();
    for i in 0..names.len() {
        cases.extend(cs.tuples.iter().map(|&t| (i, t)));
    }
    for _ in 0..cs.random {
        let i = rng.gen_range(0..names.len());
        let q0 = rng.gen_range(1..=cs.q0_max);
        let w = cs.w_tilde_choices[rng.gen_range(0..cs.w_tilde_choices.len())];
        let q = q0 * w;
        let units: Vec<u64> = (1..=q).filter(|&a| arith::gcd(a, q) == 1).collect();
        let a = units[rng.gen_range(0..units.len())];
        let y = rng.gen_range(100..=cs.y_max);
        cases.push((i, [q0, w, a, y]));
    }
    let mut table = Table::new(
        "main",
        &[
            "function",
            "q0:count",
            "W_tilde:count",
            "A:count",
            "y:count",
            "lhs:1",
            "rhs:1",
            "restricted_term:1",
            "residual:1",
            "scale:1",
            "compatible:1",
        ],
    );
    let (mut worst, mut bracket_bad, mut partition_bad) = (0.0f64, 0usize, 0usize);
    for (i, [q0, w, a, y]) in cases.iter().copied() {
        let c = with_context(
            || format!("identity at q0 = {q0}, W~ = {w}, A = {a}, y = {y}"),
            restricted_identity_check(&tbls[i], y, q0, w, a),
        )?;
        worst = worst.max(c.residual / c.scale.max(1.0));
        let (restricted, induced) = bracket_coefficients(q0, w, a)?;
        if restricted > 1e-12 || (induced <= 1e-12) != c.compatible {
            bracket_bad += 1;
        }
        let g = CharacterGroup::new(q0 * w)?;
        let (ind, rest) = g.partition_by_induced(w)?;
        if ind.len() as u64 != arith::euler_phi(w) || (ind.len() + rest.len()) as u64 != arith::euler_phi(q0 * w) {
            partition_bad += 1;
        }
        table.push(vec![
            names[i].clone(),
            q0.to_string(),
            w.to_string(),
            a.to_string(),
            y.to_string(),
            num(c.lhs),
            num(c.rhs),
            num(c.restricted_term.re),
            num(c.residual),
            num(c.scale),
            c.compatible.to_string(),
        ]);
    }
    rep.tables.push(table);
    rep.check(
        "restricted character-sum identity exact",
        worst <= cfg.assert.rel_tol,
        format!("max residual / trivial bound = {worst:e} over {} tuples", cases.len()),
    );
    rep.check(
        "inner cancellation of the bracketed coefficients",
        bracket_bad == 0,
        format!("{bracket_bad} tuples with a non-vanishing bracket"),
    );
    rep.check(
        "induced + restricted characters partition the group",
        partition_bad == 0,
        format!("{partition_bad} size mismatches"),
    );
    Ok(())
}

fn stability(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let grid = cfg.require_grid()?;
    let top = *grid.last().unwrap();
    if cfg.charsum.probes.is_empty() {
        return Err(Error::Config {
            field: "charsum.probes".into(),
            message: "stability-scan needs at least one probe".into(),
        });
    }
    let mut table = Table::new(
        "main",
        &[
            "function",
            "x:count",
            "q:count",
            "stability_max:1",
            "q0:count",
            "W_tilde:count",
            "A:count",
            "major_arc_max:1",
        ],
    );
    for p in &cfg.charsum.probes {
        let tbl = build_sieve(&resolve(&p.function, top)?, top)?;
        let mut st = Vec::new();
        let mut ma = Vec::new();
        for &x in grid {
            let s = stability_scan(&tbl, x, p.c, p.q, p.a)?;
            let m = major_arc_probe(&tbl, x, p.q0, p.w_tilde, p.a, p.theta)?;
            st.push(s.max_normalized);
            ma.push(m.normalized_deviation);
            table.push(vec![
                p.function.clone(),
                x.to_string(),
                p.q.to_string(),
                num(s.max_normalized),
                p.q0.to_string(),
                p.w_tilde.to_string(),
                p.a.to_string(),
                num(m.normalized_deviation),
            ]);
        }
        let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ");
        rep.check(
            format!("{} q = {}: stability deviation decreasing in x", p.function, p.q),
            st.windows(2).all(|w| w[1] < w[0]),
            fmt(&st),
        );
        rep.check(
            format!(
                "{} q0 = {}, W~ = {}: major-arc deviation decreasing in x",
                p.function, p.q0, p.w_tilde
            ),
            ma.windows(2).all(|w| w[1] < w[0]),
            fmt(&ma),
        );
    }
    rep.tables.push(table);
    Ok(())
}

fn sato_tate(cfg: &ExperimentConfig, rep: &mut Report) -> Result<()> {
    let mean = sato_tate_mean();
    let target = 8.0 / (3.0 * PI);
    let (mu0, mu2) = (sato_tate_mu(0.0)?, sato_tate_mu(2.0)?);
    let mut cols = vec!["mean:1", "target:1", "abs_error:1", "mu_0:1", "mu_2:1"];
    let mut row = vec![num(mean), num(target), num((mean - target).abs()), num(mu0), num(mu2)];
    let n = cfg.multfunc.tau_check;
    if n > 0 {
        // Empirical mean of |tau(p)| / p^{11/2} over primes p <= n.
        let lambda = tau::normalized_prime_eigenvalues(n);
        let primes = arith::primes_up_to(n);
        let emp = primes.iter().map(|&p| lambda[p as usize].abs()).sum::<f64>() / primes.len() as f64;
        cols.extend(["primes:count", "empirical_mean:1"]);
        row.extend([primes.len().to_string(), num(emp)]);
        rep.notes.push(format!(
            "empirical mean of |lambda(p)| over {} primes: {emp:.6}",
            primes.len()
        ));
    }
    let mut table = Table::new("main", &cols);
    table.push(row);
    rep.tables.push(table);
    rep.check(
        "Sato-Tate mean = 8/(3 pi)",
        (mean - target).abs() <= cfg.assert.abs_tol,
        format!("|mean - 8/(3 pi)| = {:e}", (mean - target).abs()),
    );
    rep.check(
        "mu(0) = 0 and mu(2) = 1",
        mu0 == 0.0 && mu2 == 1.0,
        format!("mu(0) = {mu0}, mu(2) = {mu2}"),
    );
    Ok(())
}
