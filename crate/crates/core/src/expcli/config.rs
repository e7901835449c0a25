//! TOML experiment configuration.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linsys::{ConvexBody, Halfspace, LinearSystem};
use crate::majorant::{FlatForm, MajorantParams, DEFAULT_C1, DEFAULT_GAMMA};
use crate::wtrick::WOverrides;

fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment kind; when present it must match the one given on the command line.
    pub kind: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Thread budget; 0 lets the pool pick.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub multfunc: MultfuncSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub linsys: Option<LinsysSection>,
    #[serde(default)]
    pub wtrick: WtrickSection,
    #[serde(default)]
    pub majorant: MajorantSection,
    #[serde(default)]
    pub localdensity: LocalDensitySection,
    #[serde(default)]
    pub charsum: CharsumSection,
    #[serde(default)]
    pub assert: AssertSection,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<String>,
    /// File stem for the artifacts; defaults to the kind.
    pub name: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MultfuncSection {
    /// Registry names, one per form (a single entry is used for every form).
    #[serde(default)]
    pub functions: Vec<String>,
    /// Check `tau` up to this bound in the `sieve` kind (0 = skip).
    #[serde(default)]
    pub tau_check: u64,
    #[serde(default = "default_spot_checks")]
    pub spot_checks: usize,
}

fn default_spot_checks() -> usize {
    1000
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub t: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    #[default]
    UnitBox,
    UnitSimplex,
    /// `[1/T, 1]` in one variable.
    Interval,
    Halfspaces,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinsysSection {
    pub dim: usize,
    pub matrix: Vec<Vec<i64>>,
    pub constants: Vec<i64>,
    #[serde(default)]
    pub allow_dependence: bool,
    #[serde(default)]
    pub body: BodyKind,
    #[serde(default)]
    pub halfspaces: Vec<HalfspaceSpec>,
    /// W-trick moduli and residues for `linear-forms-ratio`; `W_i = W(T)` when empty.
    #[serde(default)]
    pub w: Vec<u64>,
    #[serde(default)]
    pub a: Vec<i64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WtrickSection {
    pub w_of_x: Option<f64>,
    pub q_star: Option<u64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum FlatFormSpec {
    #[default]
    Final,
    PrimePowers,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MajorantSection {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[serde(default)]
    pub flat_form: FlatFormSpec,
    /// Progression for the average-order check.
    #[serde(default = "default_two")]
    pub w_tilde: u64,
    #[serde(default = "default_one")]
    pub a: u64,
    /// Grids for the domination check (`T <= 1e5` keeps it fast).
    #[serde(default)]
    pub domination_t: Vec<u64>,
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_c1() -> f64 {
    DEFAULT_C1
}
fn default_two() -> u64 {
    2
}
fn default_one() -> u64 {
    1
}

impl Default for MajorantSection {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            c1: DEFAULT_C1,
            flat_form: FlatFormSpec::Final,
            w_tilde: 2,
            a: 1,
            domination_t: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PMaxSpec {
    Fixed(u64),
    /// `"w"`: largest prime up to `w(T)`; `"T"`: every prime up to `T`.
    Named(String),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LocalDensitySection {
    #[serde(default = "default_a_max")]
    pub a_max: u32,
    #[serde(default = "default_p_max")]
    pub p_max: PMaxSpec,
    /// Random systems for the alpha multiplicativity check (0 = skip).
    #[serde(default)]
    pub alpha_systems: usize,
    #[serde(default = "default_lcm_max")]
    pub alpha_lcm_max: u64,
    /// Primes at which `beta_p` is compared with its closed form for all-one, `phi(n) = n`.
    #[serde(default)]
    pub closed_form_primes: Vec<u64>,
}

fn default_a_max() -> u32 {
    12
}
fn default_p_max() -> PMaxSpec {
    PMaxSpec::Named("w".into())
}
fn default_lcm_max() -> u64 {
    300
}

impl Default for LocalDensitySection {
    fn default() -> Self {
        Self {
            a_max: default_a_max(),
            p_max: default_p_max(),
            alpha_systems: 0,
            alpha_lcm_max: default_lcm_max(),
            closed_form_primes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub function: String,
    /// Modulus and exponent for the stability scan.
    pub q: u64,
    #[serde(default = "default_one_f")]
    pub c: f64,
    pub q0: u64,
    pub w_tilde: u64,
    #[serde(default = "default_one")]
    pub a: u64,
    #[serde(default = "default_one_f")]
    pub theta: f64,
}

fn default_one_f() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CharsumSection {
    /// Fixed `[q0, W~, A, y]` tuples, checked against every function.
    #[serde(default)]
    pub tuples: Vec<[u64; 4]>,
    /// Additional random tuples drawn from the seed.
    #[serde(default)]
    pub random: usize,
    #[serde(default = "default_y_max")]
    pub y_max: u64,
    #[serde(default = "default_q0_max")]
    pub q0_max: u64,
    #[serde(default = "default_w_choices")]
    pub w_tilde_choices: Vec<u64>,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
}

fn default_y_max() -> u64 {
    10_000
}
fn default_q0_max() -> u64 {
    7
}
fn default_w_choices() -> Vec<u64> {
    vec![2, 4, 6]
}

impl Default for CharsumSection {
    fn default() -> Self {
        Self {
            tuples: Vec::new(),
            random: 0,
            y_max: default_y_max(),
            q0_max: default_q0_max(),
            w_tilde_choices: default_w_choices(),
            probes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AssertSection {
    #[serde(default = "default_ratio_min")]
    pub ratio_min: f64,
    #[serde(default = "default_ratio_max")]
    pub ratio_max: f64,
    /// Relative tolerance of the exact identities.
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Largest allowed factor between domination maxima on consecutive grids.
    #[serde(default = "default_variation")]
    pub max_variation: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
}

fn default_ratio_min() -> f64 {
    1.0 / 3.0
}
fn default_ratio_max() -> f64 {
    3.0
}
fn default_rel_tol() -> f64 {
    1e-9
}
fn default_variation() -> f64 {
    2.0
}
fn default_abs_tol() -> f64 {
    1e-6
}

impl Default for AssertSection {
    fn default() -> Self {
        Self {
            ratio_min: default_ratio_min(),
            ratio_max: default_ratio_max(),
            rel_tol: default_rel_tol(),
            max_variation: default_variation(),
            abs_tol: default_abs_tol(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let at = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_else(|| "config".into());
            config_err(&at, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path.as_ref())?;
        let text = std::str::from_utf8(&bytes).map_err(|e| config_err("config", e.to_string()))?;
        Ok((Self::parse(text)?, bytes))
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("grid.t", "T grid must be strictly ascending"));
        }
        for name in self
            .multfunc
            .functions
            .iter()
            .chain(self.charsum.probes.iter().map(|p| &p.function))
        {
            crate::multfunc::resolve(name, 1 << 20).map_err(|e| config_err("multfunc.functions", e.to_string()))?;
        }
        if let Some(ls) = &self.linsys {
            if ls.matrix.len() != ls.constants.len() {
                return Err(config_err("linsys.constants", "one constant per matrix row"));
            }
            if ls.matrix.iter().any(|row| row.len() != ls.dim) {
                return Err(config_err(
                    "linsys.matrix",
                    format!("every row needs {} entries", ls.dim),
                ));
            }
            let n = self.multfunc.functions.len();
            if n != 1 && n != ls.matrix.len() {
                return Err(config_err(
                    "multfunc.functions",
                    format!("give one function or one per form ({} forms)", ls.matrix.len()),
                ));
            }
            if ls.body == BodyKind::Interval && ls.dim != 1 {
                return Err(config_err("linsys.body", "interval bodies are one-dimensional"));
            }
            if ls.body == BodyKind::Halfspaces && ls.halfspaces.is_empty() {
                return Err(config_err(
                    "linsys.halfspaces",
                    "body = \"halfspaces\" needs a halfspace list",
                ));
            }
            if (!ls.w.is_empty() && ls.w.len() != ls.matrix.len())
                || (!ls.a.is_empty() && ls.a.len() != ls.matrix.len())
            {
                return Err(config_err(
                    "linsys.w",
                    "W-trick moduli and residues need one entry per form",
                ));
            }
        }
        if let PMaxSpec::Named(s) = &self.localdensity.p_max {
            if s != "w" && s != "T" {
                return Err(config_err(
                    "localdensity.p_max",
                    format!("expected an integer, \"w\" or \"T\", got `{s}`"),
                ));
            }
        }
        if !(self.majorant.gamma > 0.0 && self.majorant.gamma < 0.5) {
            return Err(config_err("majorant.gamma", "gamma must lie in (0, 1/2)"));
        }
        if self.assert.ratio_min > self.assert.ratio_max {
            return Err(config_err("assert.ratio_min", "ratio_min exceeds ratio_max"));
        }
        Ok(())
    }

    pub fn linsys(&self) -> Result<&LinsysSection> {
        self.linsys
            .as_ref()
            .ok_or_else(|| config_err("linsys", "this experiment needs a [linsys] section"))
    }

    pub fn require_grid(&self) -> Result<&[u64]> {
        if self.grid.t.is_empty() {
            return Err(config_err("grid.t", "this experiment needs a non-empty T grid"));
        }
        Ok(&self.grid.t)
    }

    pub fn require_functions(&self) -> Result<&[String]> {
        if self.multfunc.functions.is_empty() {
            return Err(config_err(
                "multfunc.functions",
                "this experiment needs at least one function",
            ));
        }
        Ok(&self.multfunc.functions)
    }

    /// Function names, one per form of the system.
    pub fn functions_per_form(&self) -> Result<Vec<String>> {
        let r = self.linsys()?.matrix.len();
        let f = self.require_functions()?;
        Ok(if f.len() == 1 {
            vec![f[0].clone(); r]
        } else {
            f.to_vec()
        })
    }

    pub fn w_overrides(&self) -> WOverrides {
        WOverrides {
            w_of_x: self.wtrick.w_of_x,
            q_star: self.wtrick.q_star,
            b1: self.wtrick.b1,
            b2: self.wtrick.b2,
            c: self.wtrick.c,
        }
    }

    pub fn majorant_params(&self) -> Result<MajorantParams> {
        let form = match self.majorant.flat_form {
            FlatFormSpec::Final => FlatForm::Final,
            FlatFormSpec::PrimePowers => FlatForm::PrimePowers,
        };
        Ok(MajorantParams::new(self.majorant.gamma, self.majorant.c1)?.with_flat_form(form))
    }
}

impl LinsysSection {
    pub fn system(&self) -> Result<LinearSystem> {
        if self.allow_dependence {
            LinearSystem::from_matrix_allowing_dependence(&self.matrix, &self.constants)
        } else {
            LinearSystem::from_matrix(&self.matrix, &self.constants)
        }
    }

    /// The body at dilation `t` (only `interval` depends on `t`).
    pub fn body(&self, t: u64) -> Result<ConvexBody> {
        match self.body {
            BodyKind::UnitBox => ConvexBody::unit_box(self.dim),
            BodyKind::UnitSimplex => ConvexBody::unit_simplex(self.dim),
            BodyKind::Interval => ConvexBody::new(
                1,
                vec![
                    Halfspace::from_ints(&[-1], -1, t as i64),
                    Halfspace::from_ints(&[1], 1, 1),
                ],
            ),
            BodyKind::Halfspaces => {
                let hs = self
                    .halfspaces
                    .iter()
                    .map(|h| {
                        let normal: Vec<&str> = h.normal.iter().map(String::as_str).collect();
                        Halfspace::parse(&normal, &h.offset)
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| config_err("linsys.halfspaces", e.to_string()))?;
                ConvexBody::new(self.dim, hs)
            }
        }
    }
}
