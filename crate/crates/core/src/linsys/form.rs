use std::fmt;

use crate::error::{Error, Result};

/// Integer affine form `n -> <coeffs, n> + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<i64>,
    constant: i64,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Result<Self> {
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::InvalidArgument(
                "a linear form needs a non-zero coefficient".into(),
            ));
        }
        Ok(Self { coeffs, constant })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact value at `n`; overflow of the 128-bit accumulator is an error.
    pub fn eval(&self, n: &[i64]) -> Result<i128> {
        debug_assert_eq!(n.len(), self.coeffs.len());
        let mut acc = self.constant as i128;
        for (&a, &x) in self.coeffs.iter().zip(n) {
            acc = (a as i128)
                .checked_mul(x as i128)
                .and_then(|t| acc.checked_add(t))
                .ok_or_else(|| Error::Overflow(format!("{self} at {n:?}")))?;
        }
        Ok(acc)
    }

    /// `n -> w * phi(n) + a`.
    pub fn scaled(&self, w: i64, a: i64) -> Result<Self> {
        let ovf = || Error::Overflow(format!("{w} * ({self}) + {a}"));
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(w).ok_or_else(ovf))
            .collect::<Result<Vec<_>>>()?;
        let constant = self
            .constant
            .checked_mul(w)
            .and_then(|c| c.checked_add(a))
            .ok_or_else(ovf)?;
        Self::new(coeffs, constant)
    }

    /// `n -> phi(n + v)`.
    pub fn shifted(&self, v: &[i64]) -> Result<Self> {
        let c = self.eval(v)?;
        let constant = i64::try_from(c).map_err(|_| Error::Overflow(format!("shift of {self} by {v:?}")))?;
        Ok(Self {
            coeffs: self.coeffs.clone(),
            constant,
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            let m = c.unsigned_abs();
            if m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "n{}", j + 1)?;
            first = false;
        }
        if self.constant != 0 {
            let sign = if self.constant < 0 { '-' } else { '+' };
            write!(f, " {sign} {}", self.constant.unsigned_abs())?;
        }
        Ok(())
    }
}

/// `r` forms in `s` variables with pairwise independent linear parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    s: usize,
    forms: Vec<LinearForm>,
    independent: bool,
}

impl LinearSystem {
    pub fn new(s: usize, forms: Vec<LinearForm>) -> Result<Self> {
        let sys = Self::allowing_dependence(s, forms)?;
        if let Some((i, j)) = sys.dependent_pair() {
            return Err(Error::InvalidArgument(format!(
                "forms {i} ({}) and {j} ({}) have proportional linear parts",
                sys.forms[i], sys.forms[j]
            )));
        }
        Ok(sys)
    }

    /// Like [`LinearSystem::new`] but accepts proportional linear parts (e.g.
    /// `n, n + 2`), for experiments outside the pairwise-independent setting.
    pub fn allowing_dependence(s: usize, forms: Vec<LinearForm>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("a system needs at least one variable".into()));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.dim() != s {
                return Err(Error::InvalidArgument(format!(
                    "form {i} has {} coefficients, expected {s}",
                    f.dim()
                )));
            }
        }
        let mut sys = Self {
            s,
            forms,
            independent: true,
        };
        sys.independent = sys.dependent_pair().is_none();
        Ok(sys)
    }

    fn dependent_pair(&self) -> Option<(usize, usize)> {
        let f = &self.forms;
        (0..f.len())
            .flat_map(|i| (i + 1..f.len()).map(move |j| (i, j)))
            .find(|&(i, j)| proportional(f[i].coeffs(), f[j].coeffs()))
    }

    /// Whether the linear parts are pairwise independent.
    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Rows of `matrix` are coefficient vectors; `constants[i]` is the constant of form `i`.
    pub fn from_matrix(matrix: &[Vec<i64>], constants: &[i64]) -> Result<Self> {
        let sys = Self::from_matrix_allowing_dependence(matrix, constants)?;
        Self::new(sys.s, sys.forms)
    }

    pub fn from_matrix_allowing_dependence(matrix: &[Vec<i64>], constants: &[i64]) -> Result<Self> {
        if matrix.len() != constants.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficient rows but {} constants",
                matrix.len(),
                constants.len()
            )));
        }
        let s = matrix.first().map_or(0, Vec::len);
        let forms = matrix
            .iter()
            .zip(constants)
            .map(|(row, &c)| LinearForm::new(row.clone(), c))
            .collect::<Result<Vec<_>>>()?;
        Self::allowing_dependence(s, forms)
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn eval_all(&self, n: &[i64]) -> Result<Vec<i128>> {
        self.forms.iter().map(|f| f.eval(n)).collect()
    }

    /// The system `n -> (w_i phi_i(n) + a_i)_i`.
    pub fn wtricked(&self, ws: &[u64], a_list: &[i64]) -> Result<Self> {
        if ws.len() != self.len() || a_list.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "need {} moduli and residues, got {} and {}",
                self.len(),
                ws.len(),
                a_list.len()
            )));
        }
        let forms = self
            .forms
            .iter()
            .zip(ws.iter().zip(a_list))
            .map(|(f, (&w, &a))| {
                let w = i64::try_from(w).map_err(|_| Error::Overflow(format!("modulus {w}")))?;
                f.scaled(w, a)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { forms, ..self.clone() })
    }

    /// The system `n -> phi_i(n + v)`.
    pub fn shifted(&self, v: &[i64]) -> Result<Self> {
        let forms = self.forms.iter().map(|f| f.shifted(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self { forms, ..self.clone() })
    }
}

/// All 2x2 minors vanish.
fn proportional(a: &[i64], b: &[i64]) -> bool {
    for j in 0..a.len() {
        for k in j + 1..a.len() {
            if a[j] as i128 * b[k] as i128 != a[k] as i128 * b[j] as i128 {
                return false;
            }
        }
    }
    // A single column: every pair of non-zero scalars is proportional.
    true
}
