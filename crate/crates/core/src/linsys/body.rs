//! Convex bodies given by rational half-spaces, and exact lattice-point
//! enumeration of their dilates.
//!
//! The half-space system is projected once by Fourier–Motzkin elimination,
//! giving for every prefix length `j` a system in `x_0..x_j` alone. Because
//! each row reads `<a, x> <= t * b` with the same dilation `t` on every right
//! hand side, the projections do not depend on `t` and are reused for every
//! dilation. Enumeration then walks coordinates in order, slicing the feasible
//! interval of `x_j` from the level-`j` rows.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest magnitude allowed for an entry of a projected row. Together with
/// [`MAX_SCALE`] this keeps every bound computation inside `i128`.
const MAX_ROW_ENTRY: i128 = 1 << 40;
/// Largest numerator or denominator of a dilation factor.
pub const MAX_SCALE: i128 = 1 << 40;

/// `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Halfspace {
    pub fn new(normal: Vec<BigRational>, offset: BigRational) -> Self {
        Self { normal, offset }
    }

    /// From decimal or `p/q` strings.
    pub fn parse(normal: &[&str], offset: &str) -> Result<Self> {
        Ok(Self {
            normal: normal.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            offset: parse_rational(offset)?,
        })
    }

    pub fn from_ints(normal: &[i64], num: i64, den: i64) -> Self {
        Self {
            normal: normal.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            offset: BigRational::new(num.into(), den.into()),
        }
    }
}

/// Parse `"3"`, `"-2/7"` or `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u8), frac.len());
        return Ok(BigRational::new(num, den));
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    a: Vec<i128>,
    b: i128,
}

impl Row {
    fn normalized(mut self) -> Self {
        let g = self.a.iter().fold(self.b.abs(), |g, &x| g.gcd(&x));
        if g > 1 {
            self.a.iter_mut().for_each(|x| *x /= g);
            self.b /= g;
        }
        self
    }
}

/// Rows constraining coordinate `j` once `x_0..x_{j-1}` are fixed.
#[derive(Clone, Debug, Default)]
struct Level {
    upper: Vec<Row>,
    lower: Vec<Row>,
}

/// A dilation factor `num/den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scale {
    pub num: i128,
    pub den: i128,
}

impl Scale {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if num < 0 || den <= 0 || num > MAX_SCALE || den > MAX_SCALE {
            return Err(Error::OutOfRange(format!(
                "dilation {num}/{den} must be non-negative with parts at most 2^40"
            )));
        }
        let g = num.gcd(&den).max(1);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(t: u64) -> Result<Self> {
        Self::new(t as i128, 1)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A convex polytope inside `[-1, 1]^s`.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    s: usize,
    halfspaces: Vec<Halfspace>,
    rows: Vec<Row>,
    levels: Vec<Level>,
    // Rows left with no variables: `0 <= t * b`.
    constant_rows: Vec<i128>,
}

impl ConvexBody {
    /// Validates containment in `[-1, 1]^s` (an unbounded or oversized region
    /// is an error).
    pub fn new(s: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("body dimension must be >= 1".into()));
        }
        let rows = halfspaces
            .iter()
            .enumerate()
            .map(|(i, h)| integer_row(i, s, h))
            .collect::<Result<Vec<_>>>()?;
        let mut levels = vec![Level::default(); s];
        let mut current = dedup(rows.clone());
        for j in (0..s).rev() {
            for r in &current {
                match r.a[j].signum() {
                    1 => levels[j].upper.push(r.clone()),
                    -1 => levels[j].lower.push(r.clone()),
                    _ => {}
                }
            }
            current = eliminate(&current, j)?;
        }
        let constant_rows = current.iter().map(|r| r.b).collect();
        let body = Self {
            s,
            halfspaces,
            rows,
            levels,
            constant_rows,
        };
        body.check_containment()?;
        Ok(body)
    }

    /// The box `prod [lo_j, hi_j]`.
    pub fn boxed(lo: &[BigRational], hi: &[BigRational]) -> Result<Self> {
        let s = lo.len();
        let mut hs = Vec::with_capacity(2 * s);
        for j in 0..s {
            let mut e = vec![BigRational::zero(); s];
            e[j] = BigRational::one();
            hs.push(Halfspace::new(e.clone(), hi[j].clone()));
            e[j] = -BigRational::one();
            hs.push(Halfspace::new(e, -lo[j].clone()));
        }
        Self::new(s, hs)
    }

    /// `[0, 1]^s`.
    pub fn unit_box(s: usize) -> Result<Self> {
        Self::boxed(&vec![BigRational::zero(); s], &vec![BigRational::one(); s])
    }

    /// `x_j >= 0`, `sum x_j <= 1`.
    pub fn unit_simplex(s: usize) -> Result<Self> {
        let mut hs = Vec::with_capacity(s + 1);
        for j in 0..s {
            let mut e = vec![0i64; s];
            e[j] = -1;
            hs.push(Halfspace::from_ints(&e, 0, 1));
        }
        hs.push(Halfspace::from_ints(&vec![1; s], 1, 1));
        Self::new(s, hs)
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// The body shifted by `v` (each row `<a, x> <= b` becomes `<a, x> <= b + <a, v>`).
    pub fn translated(&self, v: &[BigRational]) -> Result<Self> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| {
                let shift: BigRational = h.normal.iter().zip(v).map(|(a, x)| a * x).sum();
                Halfspace::new(h.normal.clone(), &h.offset + shift)
            })
            .collect();
        Self::new(self.s, hs)
    }

    fn check_containment(&self) -> Result<()> {
        for j in 0..self.s {
            let mut current = dedup(self.rows.clone());
            for k in (0..self.s).rev() {
                if k != j {
                    current = eliminate(&current, k)?;
                }
            }
            if current.iter().any(|r| r.a.iter().all(|&x| x == 0) && r.b < 0) {
                // Empty body: vacuously inside the box.
                return Ok(());
            }
            let unit = BigRational::one();
            let mut has_hi = false;
            let mut has_lo = false;
            for r in &current {
                let c = r.a[j];
                if c == 0 {
                    continue;
                }
                let bound = BigRational::new(r.b.into(), c.into());
                if c > 0 {
                    has_hi |= bound <= unit;
                } else {
                    has_lo |= bound >= -unit.clone();
                }
            }
            if !(has_hi && has_lo) {
                return Err(Error::InvalidArgument(format!(
                    "body is not contained in [-1, 1]^{} (coordinate {j})",
                    self.s
                )));
            }
        }
        Ok(())
    }

    fn constants_ok(&self, scale: Scale) -> bool {
        self.constant_rows.iter().all(|&b| b * scale.num >= 0)
    }

    /// Integer interval for `x_j` given the prefix `x[..j]`.
    fn bounds(&self, j: usize, prefix: &[i64], scale: Scale) -> Option<(i64, i64)> {
        let level = &self.levels[j];
        let rhs = |r: &Row| -> i128 {
            let mut acc = 0i128;
            for (a, &x) in r.a[..j].iter().zip(prefix) {
                acc += a * x as i128;
            }
            scale.num * r.b - scale.den * acc
        };
        let mut hi = i128::MAX;
        for r in &level.upper {
            hi = hi.min(rhs(r).div_euclid(scale.den * r.a[j]));
        }
        let mut lo = i128::MIN;
        for r in &level.lower {
            let d = -scale.den * r.a[j];
            lo = lo.max(-(rhs(r).div_euclid(d)));
        }
        if hi == i128::MAX || lo == i128::MIN || lo > hi {
            return None;
        }
        Some((lo as i64, hi as i64))
    }

    /// Feasible integer range of the first coordinate.
    pub fn first_coordinate_range(&self, scale: Scale) -> Option<(i64, i64)> {
        if !self.constants_ok(scale) {
            return None;
        }
        self.bounds(0, &[], scale)
    }

    /// Lattice points of `scale * K` in lexicographic order.
    pub fn lattice_points(&self, scale: Scale) -> LatticePoints<'_> {
        LatticePoints::new(self, scale, None)
    }

    /// Lattice points with first coordinate in `[lo, hi]`.
    pub fn lattice_points_in_slab(&self, scale: Scale, lo: i64, hi: i64) -> LatticePoints<'_> {
        LatticePoints::new(self, scale, Some((lo, hi)))
    }

    /// Calls `f(prefix, lo, hi)` for every line `prefix x {lo..=hi}` of
    /// lattice points, with first coordinate restricted to `[x0_lo, x0_hi]`.
    /// The prefix has length `s - 1`.
    pub fn for_each_line<E>(
        &self,
        scale: Scale,
        x0_lo: i64,
        x0_hi: i64,
        mut f: impl FnMut(&[i64], i64, i64) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        if !self.constants_ok(scale) {
            return Ok(());
        }
        if self.s == 1 {
            if let Some((lo, hi)) = self.bounds(0, &[], scale) {
                let (lo, hi) = (lo.max(x0_lo), hi.min(x0_hi));
                if lo <= hi {
                    f(&[], lo, hi)?;
                }
            }
            return Ok(());
        }
        let mut prefix = vec![0i64; self.s - 1];
        self.lines_rec(0, &mut prefix, scale, Some((x0_lo, x0_hi)), &mut f)
    }

    fn lines_rec<E>(
        &self,
        j: usize,
        prefix: &mut Vec<i64>,
        scale: Scale,
        clamp: Option<(i64, i64)>,
        f: &mut impl FnMut(&[i64], i64, i64) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        let Some((mut lo, mut hi)) = self.bounds(j, &prefix[..j], scale) else {
            return Ok(());
        };
        if let Some((a, b)) = clamp {
            lo = lo.max(a);
            hi = hi.min(b);
        }
        if j + 1 == self.s {
            if lo <= hi {
                f(prefix, lo, hi)?;
            }
            return Ok(());
        }
        for x in lo..=hi {
            prefix[j] = x;
            self.lines_rec(j + 1, prefix, scale, None, f)?;
        }
        Ok(())
    }

    /// `#(Z^s ∩ scale * K)`.
    pub fn lattice_count(&self, scale: Scale) -> u64 {
        let Some((lo, hi)) = self.first_coordinate_range(scale) else {
            return 0;
        };
        let mut count = 0u64;
        let _ = self.for_each_line::<()>(scale, lo, hi, |_, a, b| {
            count += (b - a + 1) as u64;
            Ok(())
        });
        count
    }

    /// Vertices, from every `s`-subset of half-spaces whose boundary hyperplanes
    /// meet in a single feasible point.
    pub fn vertices(&self) -> Vec<Vec<BigRational>> {
        let m = self.halfspaces.len();
        let mut out: Vec<Vec<BigRational>> = Vec::new();
        let mut idx: Vec<usize> = (0..self.s).collect();
        if m < self.s {
            return out;
        }
        loop {
            if let Some(v) = solve_subset(&self.halfspaces, &idx, self.s) {
                if self.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
            // next combination
            let mut i = self.s;
            while i > 0 && idx[i - 1] == m - self.s + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for k in i..self.s {
                idx[k] = idx[k - 1] + 1;
            }
        }
        out
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.halfspaces.iter().all(|h| {
            let lhs: BigRational = h.normal.iter().zip(x).map(|(a, v)| a * v).sum();
            lhs <= h.offset
        })
    }

    pub fn contains_strictly(&self, x: &[BigRational]) -> bool {
        self.halfspaces.iter().all(|h| {
            let lhs: BigRational = h.normal.iter().zip(x).map(|(a, v)| a * v).sum();
            lhs < h.offset
        })
    }

    /// A point in the interior, found by taking midpoints of the projected
    /// feasible intervals coordinate by coordinate; `None` if the body has
    /// empty interior.
    pub fn interior_point(&self) -> Option<Vec<BigRational>> {
        if self.constant_rows.iter().any(|&b| b < 0) {
            return None;
        }
        let mut x: Vec<BigRational> = Vec::with_capacity(self.s);
        for j in 0..self.s {
            let level = &self.levels[j];
            let bound = |r: &Row| -> BigRational {
                let mut rhs = BigRational::from_integer(r.b.into());
                for (a, v) in r.a[..j].iter().zip(&x) {
                    rhs -= BigRational::from_integer((*a).into()) * v;
                }
                rhs / BigRational::from_integer(r.a[j].into())
            };
            let hi = level.upper.iter().map(bound).min()?;
            let lo = level.lower.iter().map(bound).max()?;
            if lo >= hi {
                return None;
            }
            x.push((lo + hi) / BigRational::from_integer(2.into()));
        }
        self.contains_strictly(&x).then_some(x)
    }

    /// Lattice count of `N * K` over `(2N + 1)^s`, the share of the box
    /// `[-1, 1]^s` the body occupies at resolution `N`.
    pub fn volume_fraction_estimate(&self, resolution: u64) -> Result<f64> {
        let c = self.lattice_count(Scale::integer(resolution)?);
        Ok(c as f64 / ((2 * resolution + 1) as f64).powi(self.s as i32))
    }
}

fn integer_row(i: usize, s: usize, h: &Halfspace) -> Result<Row> {
    if h.normal.len() != s {
        return Err(Error::InvalidArgument(format!(
            "half-space {i} has {} coefficients, expected {s}",
            h.normal.len()
        )));
    }
    let den = h
        .normal
        .iter()
        .chain(std::iter::once(&h.offset))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let to_int = |q: &BigRational| -> Result<i128> {
        (q * BigRational::from_integer(den.clone()))
            .to_integer()
            .to_i128()
            .filter(|v| v.abs() <= MAX_ROW_ENTRY)
            .ok_or_else(|| Error::Overflow(format!("half-space {i} coefficients exceed 2^40")))
    };
    let a = h.normal.iter().map(to_int).collect::<Result<Vec<_>>>()?;
    let b = to_int(&h.offset)?;
    Ok(Row { a, b }.normalized())
}

fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut seen = HashSet::new();
    rows.into_iter().filter(|r| seen.insert(r.clone())).collect()
}

/// One Fourier–Motzkin step removing variable `k`.
fn eliminate(rows: &[Row], k: usize) -> Result<Vec<Row>> {
    let mut out: Vec<Row> = rows.iter().filter(|r| r.a[k] == 0).cloned().collect();
    let pos: Vec<&Row> = rows.iter().filter(|r| r.a[k] > 0).collect();
    let neg: Vec<&Row> = rows.iter().filter(|r| r.a[k] < 0).collect();
    for p in &pos {
        for n in &neg {
            let (cp, cn) = (-n.a[k], p.a[k]);
            let a: Vec<i128> = p.a.iter().zip(&n.a).map(|(x, y)| cp * x + cn * y).collect();
            let row = Row {
                a,
                b: cp * p.b + cn * n.b,
            }
            .normalized();
            if row
                .a
                .iter()
                .chain(std::iter::once(&row.b))
                .any(|v| v.abs() > MAX_ROW_ENTRY)
            {
                return Err(Error::Overflow("projected half-space coefficients exceed 2^40".into()));
            }
            out.push(row);
        }
    }
    Ok(dedup(out))
}

/// Intersection point of the boundary hyperplanes in `idx`, if unique.
fn solve_subset(hs: &[Halfspace], idx: &[usize], s: usize) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = idx
        .iter()
        .map(|&i| {
            let mut row = hs[i].normal.clone();
            row.push(hs[i].offset.clone());
            row
        })
        .collect();
    for col in 0..s {
        let piv = (col..s).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for c in col..=s {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..s {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=s {
                    let t = &factor * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[s].clone()).collect())
}

/// Streaming lexicographic enumeration of `Z^s ∩ scale * K`.
pub struct LatticePoints<'a> {
    body: &'a ConvexBody,
    scale: Scale,
    clamp: Option<(i64, i64)>,
    point: Vec<i64>,
    hi: Vec<i64>,
    started: bool,
    done: bool,
}

impl<'a> LatticePoints<'a> {
    fn new(body: &'a ConvexBody, scale: Scale, clamp: Option<(i64, i64)>) -> Self {
        Self {
            body,
            scale,
            clamp,
            point: vec![0; body.s],
            hi: vec![0; body.s],
            started: false,
            done: false,
        }
    }

    fn level_bounds(&self, j: usize) -> Option<(i64, i64)> {
        let (mut lo, mut hi) = self.body.bounds(j, &self.point[..j], self.scale)?;
        if j == 0 {
            if let Some((a, b)) = self.clamp {
                lo = lo.max(a);
                hi = hi.min(b);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Increment the deepest coordinate below `upto` that has room; returns it.
    fn bump(&mut self, upto: usize) -> Option<usize> {
        (0..upto).rev().find(|&j| self.point[j] < self.hi[j]).map(|j| {
            self.point[j] += 1;
            j
        })
    }
}

impl Iterator for LatticePoints<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let mut from = if !self.started {
            self.started = true;
            if !self.body.constants_ok(self.scale) {
                self.done = true;
                return None;
            }
            0
        } else {
            match self.bump(self.body.s) {
                Some(j) => j + 1,
                None => {
                    self.done = true;
                    return None;
                }
            }
        };
        loop {
            let mut failed = None;
            for j in from..self.body.s {
                match self.level_bounds(j) {
                    Some((lo, hi)) => {
                        self.point[j] = lo;
                        self.hi[j] = hi;
                    }
                    None => {
                        failed = Some(j);
                        break;
                    }
                }
            }
            match failed {
                None => return Some(self.point.clone()),
                Some(j) => match self.bump(j) {
                    Some(k) => from = k + 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

/// Render a rational vector for diagnostics.
pub fn format_point(v: &[BigRational]) -> Vec<String> {
    v.iter()
        .map(|q| {
            if q.is_integer() {
                q.to_integer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom().abs())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    /// Full bounding-box scan oracle.
    fn box_scan(body: &ConvexBody, t: i64) -> Vec<Vec<i64>> {
        let s = body.dim();
        let mut out = Vec::new();
        let mut p = vec![-t; s];
        let tq = BigRational::from_integer(t.into());
        loop {
            let x: Vec<BigRational> = p.iter().map(|&v| BigRational::from_integer(v.into()) / &tq).collect();
            if body.contains(&x) {
                out.push(p.clone());
            }
            let mut j = s;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if p[j] < t {
                    p[j] += 1;
                    break;
                }
                p[j] = -t;
            }
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("3"), BigRational::from_integer(3.into()));
        assert_eq!(q("-2/4"), BigRational::new((-1).into(), 2.into()));
        assert_eq!(q("0.125"), BigRational::new(1.into(), 8.into()));
        assert_eq!(q("-1.5"), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn unit_box_and_simplex_counts() {
        let b = ConvexBody::unit_box(2).unwrap();
        assert_eq!(b.lattice_count(Scale::integer(3).unwrap()), 16);
        assert_eq!(b.lattice_points(Scale::integer(3).unwrap()).count(), 16);
        let s = ConvexBody::unit_simplex(2).unwrap();
        let pts: Vec<_> = s.lattice_points(Scale::integer(2).unwrap()).collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[5], vec![2, 0]);
    }

    #[test]
    fn containment_is_enforced() {
        let big = ConvexBody::boxed(&[q("0")], &[q("2")]);
        assert!(big.is_err());
        let open = ConvexBody::new(1, vec![Halfspace::parse(&["1"], "1/2").unwrap()]);
        assert!(open.is_err());
    }

    #[test]
    fn empty_body_yields_nothing() {
        let hs = vec![
            Halfspace::parse(&["1"], "-1/2").unwrap(),
            Halfspace::parse(&["-1"], "-1/2").unwrap(),
        ];
        let b = ConvexBody::new(1, hs).unwrap();
        assert_eq!(b.lattice_count(Scale::integer(10).unwrap()), 0);
        assert!(b.interior_point().is_none());
    }

    #[test]
    fn vertices_of_simplex() {
        let s = ConvexBody::unit_simplex(2).unwrap();
        let mut v = s.vertices();
        v.sort();
        assert_eq!(v.len(), 3);
        assert!(s.interior_point().is_some());
    }

    #[test]
    fn rational_dilation() {
        // [0,1] dilated by 7/2 holds 0..=3.
        let b = ConvexBody::unit_box(1).unwrap();
        assert_eq!(b.lattice_count(Scale::new(7, 2).unwrap()), 4);
    }

    fn random_body() -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64, i64)>)> {
        (1usize..=3).prop_flat_map(|s| {
            let row = (prop::collection::vec(-3i64..=3, s), -3i64..=3, 1i64..=4);
            (Just(s), prop::collection::vec(row, 0..5))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn enumeration_matches_box_scan((s, extra) in random_body(), t in 1i64..=12) {
            let mut hs: Vec<Halfspace> = Vec::new();
            for j in 0..s {
                let mut e = vec![0i64; s];
                e[j] = 1;
                hs.push(Halfspace::from_ints(&e, 1, 1));
                e[j] = -1;
                hs.push(Halfspace::from_ints(&e, 1, 1));
            }
            for (a, num, den) in extra {
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                hs.push(Halfspace::from_ints(&a, num, den));
            }
            let body = ConvexBody::new(s, hs).unwrap();
            let scale = Scale::integer(t as u64).unwrap();
            let fast: Vec<_> = body.lattice_points(scale).collect();
            prop_assert_eq!(&fast, &box_scan(&body, t));
            prop_assert_eq!(body.lattice_count(scale), fast.len() as u64);
            if let Some(x) = body.interior_point() {
                prop_assert!(body.contains_strictly(&x));
            }
        }
    }
}
