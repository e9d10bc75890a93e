//! Partially open rational polyhedra.

mod fm;
mod lp;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::rational::{dot, format_rational, parse_rational, primitive_integral, Rational};
use crate::numkernel::RatMatrix;

pub use fm::{fm_eliminate, fm_eliminate_many, lift_value, remove_redundant, simplify, FmTrace};
pub use lp::{is_feasible, lp_optimize, maximize_closed, maximize_rows, ClosedLp, LpOutcome, LpStatus, Sense};

/// `a . x <= beta`, or `a . x < beta` when `strict`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearConstraint {
    pub a: Vec<Rational>,
    pub beta: Rational,
    pub strict: bool,
}

impl LinearConstraint {
    pub fn new(a: Vec<Rational>, beta: Rational, strict: bool) -> Self {
        LinearConstraint { a, beta, strict }
    }

    pub fn le(a: Vec<Rational>, beta: Rational) -> Self {
        Self::new(a, beta, false)
    }

    pub fn lt(a: Vec<Rational>, beta: Rational) -> Self {
        Self::new(a, beta, true)
    }

    /// `a . x >= beta`
    pub fn ge(a: Vec<Rational>, beta: Rational) -> Self {
        Self::new(a.into_iter().map(|x| -x).collect(), -beta, false)
    }

    /// `a . x > beta`
    pub fn gt(a: Vec<Rational>, beta: Rational) -> Self {
        Self::new(a.into_iter().map(|x| -x).collect(), -beta, true)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// For a zero row, whether `0 <= beta` (or `0 < beta`) holds.
    pub fn constant_truth(&self) -> Option<bool> {
        if !self.is_constant() {
            return None;
        }
        Some(if self.strict { self.beta.is_positive() } else { !self.beta.is_negative() })
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = dot(&self.a, x);
        if self.strict {
            v < self.beta
        } else {
            v <= self.beta
        }
    }

    /// Scales by a positive factor so that `a` is a primitive integral vector.
    pub fn normalized(&self) -> LinearConstraint {
        if self.is_constant() {
            return self.clone();
        }
        let (ints, f) = primitive_integral(&self.a);
        LinearConstraint {
            a: ints.into_iter().map(Rational::from_integer).collect(),
            beta: &self.beta * f,
            strict: self.strict,
        }
    }

    /// The complementary half-space.
    pub fn negated(&self) -> LinearConstraint {
        LinearConstraint {
            a: self.a.iter().map(|x| -x).collect(),
            beta: -&self.beta,
            strict: !self.strict,
        }
    }

    /// Substitutes `x = T y + t0`.
    pub fn substitute(&self, t: &RatMatrix, t0: &[Rational]) -> LinearConstraint {
        LinearConstraint {
            a: t.vec_mul(&self.a),
            beta: &self.beta - dot(&self.a, t0),
            strict: self.strict,
        }
    }

    /// Inserts zero coefficients so that old variable `i` lands at `positions[i]`.
    pub fn embed(&self, new_dim: usize, positions: &[usize]) -> LinearConstraint {
        let mut a = vec![Rational::zero(); new_dim];
        for (i, &p) in positions.iter().enumerate() {
            a[p] = self.a[i].clone();
        }
        LinearConstraint { a, beta: self.beta.clone(), strict: self.strict }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.a.iter().map(format_rational).collect::<Vec<_>>(),
            "beta": format_rational(&self.beta),
            "strict": self.strict,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ConstraintRepr {
    a: Vec<String>,
    beta: String,
    #[serde(default)]
    strict: bool,
}

impl Serialize for LinearConstraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConstraintRepr {
            a: self.a.iter().map(format_rational).collect(),
            beta: format_rational(&self.beta),
            strict: self.strict,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearConstraint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ConstraintRepr::deserialize(d)?;
        let a = r
            .a
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let beta = parse_rational(&r.beta).map_err(serde::de::Error::custom)?;
        Ok(LinearConstraint { a, beta, strict: r.strict })
    }
}

/// Finite system of closed and strict linear inequalities in `dim` variables.
///
/// Constant rows are resolved on insertion: true ones are dropped and a false
/// one collapses the system to the single row `0 <= -1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartiallyOpenPolyhedron {
    dim: usize,
    constraints: Vec<LinearConstraint>,
}

impl PartiallyOpenPolyhedron {
    /// The whole space.
    pub fn universe(dim: usize) -> Self {
        PartiallyOpenPolyhedron { dim, constraints: Vec::new() }
    }

    pub fn empty(dim: usize) -> Self {
        PartiallyOpenPolyhedron { dim, constraints: vec![Self::false_row(dim)] }
    }

    fn false_row(dim: usize) -> LinearConstraint {
        LinearConstraint::le(vec![Rational::zero(); dim], -Rational::one())
    }

    pub fn new(dim: usize, constraints: Vec<LinearConstraint>) -> Result<Self> {
        let mut p = Self::universe(dim);
        for c in constraints {
            if c.dim() != dim {
                return Err(Error::Dimension(format!("constraint has {} coefficients, expected {dim}", c.dim())));
            }
            p.push(c);
        }
        Ok(p)
    }

    /// `A x <= b` with all rows closed.
    pub fn from_matrix(a: &RatMatrix, b: &[Rational]) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::Dimension(format!("{} rows but {} right-hand sides", a.nrows(), b.len())));
        }
        Self::new(a.ncols(), a.rows_iter().zip(b).map(|(r, bi)| LinearConstraint::le(r.to_vec(), bi.clone())).collect())
    }

    /// Box `lo <= x <= hi`.
    pub fn boxed(lo: &[Rational], hi: &[Rational]) -> Self {
        let n = lo.len();
        let mut rows = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            rows.push(LinearConstraint::le(e.clone(), hi[i].clone()));
            rows.push(LinearConstraint::ge(e, lo[i].clone()));
        }
        Self::new(n, rows).expect("box rows have the right length")
    }

    pub fn push(&mut self, c: LinearConstraint) {
        assert_eq!(c.dim(), self.dim, "constraint arity mismatch");
        match c.constant_truth() {
            Some(true) => {}
            Some(false) => {
                self.constraints = vec![Self::false_row(self.dim)];
            }
            None => {
                if !self.is_trivially_empty() {
                    self.constraints.push(c)
                }
            }
        }
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = LinearConstraint>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn intersect(&self, other: &PartiallyOpenPolyhedron) -> PartiallyOpenPolyhedron {
        assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        p.extend(other.constraints.iter().cloned());
        p
    }

    pub fn with(&self, c: LinearConstraint) -> PartiallyOpenPolyhedron {
        let mut p = self.clone();
        p.push(c);
        p
    }

    pub fn is_trivially_empty(&self) -> bool {
        self.constraints.len() == 1 && self.constraints[0].is_constant()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty_system(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.strict)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.dim, "point arity mismatch");
        self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn closure(&self) -> PartiallyOpenPolyhedron {
        PartiallyOpenPolyhedron {
            dim: self.dim,
            constraints: self.constraints.iter().map(|c| LinearConstraint { strict: false, ..c.clone() }).collect(),
        }
    }

    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.constraints.iter().map(|c| c.a.clone()).collect(), self.dim)
            .expect("constraints share the dimension")
    }

    pub fn rhs(&self) -> Vec<Rational> {
        self.constraints.iter().map(|c| c.beta.clone()).collect()
    }

    /// Substitutes `x = T y + t0`; the result lives in `T.ncols()` variables.
    pub fn substitute(&self, t: &RatMatrix, t0: &[Rational]) -> PartiallyOpenPolyhedron {
        assert_eq!(t.nrows(), self.dim);
        let mut p = Self::universe(t.ncols());
        p.extend(self.constraints.iter().map(|c| c.substitute(t, t0)));
        p
    }

    /// Fixes variable `k` to `value` and drops it.
    pub fn fix_variable(&self, k: usize, value: &Rational) -> PartiallyOpenPolyhedron {
        let mut p = Self::universe(self.dim - 1);
        p.extend(self.constraints.iter().map(|c| {
            let mut a = c.a.clone();
            let ak = a.remove(k);
            LinearConstraint { a, beta: &c.beta - ak * value, strict: c.strict }
        }));
        p
    }

    /// Fixes the last `values.len()` variables.
    pub fn fix_trailing(&self, values: &[Rational]) -> PartiallyOpenPolyhedron {
        let keep = self.dim - values.len();
        let mut p = Self::universe(keep);
        p.extend(self.constraints.iter().map(|c| {
            let shift = dot(&c.a[keep..], values);
            LinearConstraint { a: c.a[..keep].to_vec(), beta: &c.beta - shift, strict: c.strict }
        }));
        p
    }

    /// Re-indexes into `new_dim` variables, old variable `i` going to `positions[i]`.
    pub fn embed(&self, new_dim: usize, positions: &[usize]) -> PartiallyOpenPolyhedron {
        assert_eq!(positions.len(), self.dim);
        PartiallyOpenPolyhedron {
            dim: new_dim,
            constraints: self.constraints.iter().map(|c| c.embed(new_dim, positions)).collect(),
        }
    }

    /// Appends `extra` unconstrained variables at the end.
    pub fn extend_dim(&self, extra: usize) -> PartiallyOpenPolyhedron {
        let positions: Vec<usize> = (0..self.dim).collect();
        self.embed(self.dim + extra, &positions)
    }

    pub fn translate(&self, v: &[Rational]) -> PartiallyOpenPolyhedron {
        self.affine_image(v, &Rational::one()).expect("unit scale never degenerates")
    }

    pub fn scale(&self, alpha: &Rational) -> Result<PartiallyOpenPolyhedron> {
        self.affine_image(&vec![Rational::zero(); self.dim], alpha)
    }

    /// `v + alpha * P`. With `alpha = 0` a non-empty bounded `P` collapses to `{v}`.
    pub fn affine_image(&self, v: &[Rational], alpha: &Rational) -> Result<PartiallyOpenPolyhedron> {
        assert_eq!(v.len(), self.dim);
        if alpha.is_negative() {
            return Err(Error::Dimension("negative scale factor".into()));
        }
        if alpha.is_zero() {
            if is_feasible(self).is_none() {
                return Ok(Self::empty(self.dim));
            }
            if !self.is_bounded() {
                return Err(Error::DegenerateScale);
            }
            let mut p = Self::boxed(v, v);
            p.constraints.dedup();
            return Ok(p);
        }
        let mut p = Self::universe(self.dim);
        p.extend(self.constraints.iter().map(|c| LinearConstraint {
            a: c.a.clone(),
            beta: &c.beta * alpha + dot(&c.a, v),
            strict: c.strict,
        }));
        Ok(p)
    }

    /// Whether the closure has no recession direction. Empty sets count as bounded.
    pub fn is_bounded(&self) -> bool {
        if is_feasible(self).is_none() {
            return true;
        }
        let a = self.matrix();
        if a.rank() < self.dim {
            return false;
        }
        // recession cone {r : A r <= 0} is {0} iff max sum(-A r) over it is 0 with r bounded
        let mut cone = Self::universe(self.dim);
        for row in a.rows_iter() {
            cone.push(LinearConstraint::le(row.to_vec(), Rational::zero()));
        }
        for i in 0..self.dim {
            for sign in [1i64, -1] {
                let mut c = vec![Rational::zero(); self.dim];
                c[i] = Rational::from_integer(BigInt::from(sign));
                if !matches!(maximize_closed(&cone, &c), ClosedLp::Optimal { .. }) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "constraints": self.constraints.iter().map(LinearConstraint::to_json).collect::<Vec<_>>(),
        })
    }
}

/// All `n`-subsets of rows (ascending, 0-based) whose submatrix is non-singular.
pub fn enumerate_bases(a: &RatMatrix) -> Result<Vec<Vec<usize>>> {
    let n = a.ncols();
    if a.rank() < n {
        return Err(Error::NotFullColumnRank);
    }
    let mut out = Vec::new();
    for subset in combinations(a.nrows(), n) {
        if !a.select_rows(&subset).det().is_zero() {
            out.push(subset);
        }
    }
    Ok(out)
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `{b : A x <= b has a real solution}` in the `m` right-hand-side variables.
pub fn rhs_feasibility_region(a: &RatMatrix) -> PartiallyOpenPolyhedron {
    let (m, n) = (a.nrows(), a.ncols());
    // variables (b, x): A x - b <= 0
    let rows = (0..m).map(|i| {
        let mut r = vec![Rational::zero(); m + n];
        r[i] = -Rational::one();
        r[m..].clone_from_slice(a.row(i));
        LinearConstraint::le(r, Rational::zero())
    });
    let sys = PartiallyOpenPolyhedron::new(m + n, rows.collect()).expect("consistent rows");
    fm::fm_eliminate_many(&sys, &(m..m + n).collect::<Vec<_>>(), true).0
}
