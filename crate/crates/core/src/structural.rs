//! Partition of right-hand-side space into integer projections of partially
//! open polyhedra, each carrying candidate maps `b -> U ceil(T (b, z))` that
//! decide integer feasibility of `P_b`.
//!
//! The construction recurses on the number of free variables `k` of a system
//! `M y <= beta(p)` whose right-hand side is affine in a parameter vector `p`
//! (right-hand side first, then auxiliary integral coordinates).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::io::{int_matrix_json, polyhedron_json, rat_matrix_json, rat_vec_json};
use crate::lattice::{finite_width_test, recession_interior};
use crate::milp::integer_feasible;
use crate::numkernel::rational::{ceil, dot, floor, from_int, Rational};
use crate::numkernel::{unimodular_for_direction, IntMatrix, RatMatrix, UnimodularMatrix};
use crate::paramwidth::{basic_solution_map, flat_direction_triples};
use crate::polyhedron::{enumerate_bases, is_feasible, simplify, LinearConstraint, PartiallyOpenPolyhedron};

/// `p -> matrix p + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: RatMatrix,
    pub offset: Vec<Rational>,
}

impl AffineMap {
    pub fn identity(d: usize) -> Self {
        AffineMap { matrix: RatMatrix::identity(d), offset: vec![Rational::zero(); d] }
    }

    pub fn zero(out: usize, d: usize) -> Self {
        AffineMap { matrix: RatMatrix::zeros(out, d), offset: vec![Rational::zero(); out] }
    }

    pub fn outputs(&self) -> usize {
        self.offset.len()
    }

    pub fn inputs(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, p: &[Rational]) -> Vec<Rational> {
        let mut v = self.matrix.mul_vec(p);
        for (x, o) in v.iter_mut().zip(&self.offset) {
            *x += o;
        }
        v
    }

    /// Output `i` as `(coefficients, constant)`.
    fn row(&self, i: usize) -> (Vec<Rational>, Rational) {
        (self.matrix.row(i).to_vec(), self.offset[i].clone())
    }

    /// The linear form `h . self(p)`.
    fn form(&self, h: &[Rational]) -> (Vec<Rational>, Rational) {
        (self.matrix.vec_mul(h), dot(h, &self.offset))
    }

    fn select_rows(&self, idx: &[usize]) -> AffineMap {
        AffineMap { matrix: self.matrix.select_rows(idx), offset: idx.iter().map(|&i| self.offset[i].clone()).collect() }
    }

    /// Input `i` moves to `positions[i]` in a space of `new_dim` inputs.
    fn embed(&self, new_dim: usize, positions: &[usize]) -> AffineMap {
        let mut m = RatMatrix::zeros(self.outputs(), new_dim);
        for r in 0..self.outputs() {
            for (c, &pos) in positions.iter().enumerate() {
                m[(r, pos)] = self.matrix[(r, c)].clone();
            }
        }
        AffineMap { matrix: m, offset: self.offset.clone() }
    }

    /// `left * self`.
    fn premul(&self, left: &RatMatrix) -> AffineMap {
        AffineMap { matrix: left.mul(&self.matrix), offset: left.mul_vec(&self.offset) }
    }

    pub fn to_json(&self) -> Value {
        json!({"matrix": rat_matrix_json(&self.matrix), "offset": rat_vec_json(&self.offset)})
    }
}

/// The map `(b, z) -> U ceil(T (b, z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub u: UnimodularMatrix,
    pub t: AffineMap,
}

impl Candidate {
    pub fn point(&self, bz: &[Rational]) -> Vec<BigInt> {
        let w: Vec<BigInt> = self.t.apply(bz).iter().map(ceil).collect();
        self.u.matrix().mul_vec(&w)
    }

    pub fn to_json(&self) -> Value {
        json!({"U": int_matrix_json(self.u.matrix()), "T": self.t.to_json()})
    }
}

/// One region `S = S' / Z^l` with its candidates. The auxiliary coordinates
/// are the last `l` of `sprime`.
#[derive(Clone, Debug)]
pub struct CandidateScheme {
    pub sprime: PartiallyOpenPolyhedron,
    pub l: usize,
    pub candidates: Vec<Candidate>,
}

impl CandidateScheme {
    pub fn rhs_dim(&self) -> usize {
        self.sprime.dim() - self.l
    }

    /// Auxiliary coordinates `z` with `(b, z)` in `S'`, if `b` lies in the region.
    pub fn aux_witness(&self, b: &[Rational], cfg: &Config) -> Result<Option<Vec<BigInt>>> {
        let m = self.rhs_dim();
        if b.len() != m {
            return Err(Error::Dimension(format!("b has {} entries, expected {m}", b.len())));
        }
        if self.l == 0 {
            return Ok(self.sprime.contains(b).then(Vec::new));
        }
        let mut t = RatMatrix::zeros(m + self.l, self.l);
        for i in 0..self.l {
            t[(m + i, i)] = Rational::one();
        }
        let mut t0 = b.to_vec();
        t0.resize(m + self.l, Rational::zero());
        let fiber = self.sprime.substitute(&t, &t0);
        let r = integer_feasible(&fiber, cfg)?;
        Ok(r.witness.map(|z| z.iter().map(floor).collect()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "Sprime": polyhedron_json(&self.sprime),
            "l": self.l,
            "candidates": self.candidates.iter().map(Candidate::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct StructuralPartition {
    pub schemes: Vec<CandidateScheme>,
}

impl StructuralPartition {
    /// Every scheme containing `b`, with its auxiliary witness.
    pub fn locate_all(&self, b: &[Rational], cfg: &Config) -> Result<Vec<(usize, Vec<BigInt>)>> {
        let mut out = Vec::new();
        for (i, s) in self.schemes.iter().enumerate() {
            if let Some(z) = s.aux_witness(b, cfg)? {
                out.push((i, z));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.schemes.iter().map(CandidateScheme::to_json).collect())
    }
}

/// The points `U_j ceil(T_j (b, z))` in candidate order.
pub fn evaluate_candidates(scheme: &CandidateScheme, b: &[Rational], cfg: &Config) -> Result<Vec<Vec<BigInt>>> {
    let z = scheme.aux_witness(b, cfg)?.ok_or(Error::NotInRegion)?;
    let mut bz = b.to_vec();
    bz.extend(z.iter().map(from_int));
    Ok(scheme.candidates.iter().map(|c| c.point(&bz)).collect())
}

/// Largest scheme sizes this construction can produce for `n` variables and
/// `m` rows: `(auxiliary coordinates, candidates per scheme)`.
pub fn scheme_size_bounds(n: usize, m: usize, cfg: &Config) -> Result<(usize, usize)> {
    let (mut aux, mut cands) = (0usize, 1usize);
    for k in 2..=n {
        let slabs = slab_count(k, cfg)?;
        aux = 1 + slabs * aux;
        cands = (slabs * cands).max(binomial(m, k));
    }
    Ok((aux, cands))
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (m - i) / (i + 1))
}

fn slab_count(k: usize, cfg: &Config) -> Result<usize> {
    let omega = cfg.flatness.get(k)?;
    let j = floor(&omega);
    usize::try_from(j + 1).map_err(|_| Error::LimitExceeded(format!("flatness constant for dimension {k}")))
}

/// Partitions `Q` (right-hand sides of `A x <= b`) into candidate schemes.
pub fn structural_partition(a: &RatMatrix, q: &PartiallyOpenPolyhedron, cfg: &Config) -> Result<StructuralPartition> {
    let (m, n) = (a.nrows(), a.ncols());
    if q.dim() != m {
        return Err(Error::Dimension(format!("Q has arity {}, expected {m}", q.dim())));
    }
    if n > cfg.max_dim {
        return Err(Error::DimensionTooLarge(n, cfg.max_dim));
    }
    if a.rank() < n {
        return Err(Error::NotFullColumnRank);
    }
    let pieces = stage(a, &AffineMap::identity(m), q, cfg)?;
    let schemes = pieces
        .into_iter()
        .map(|p| CandidateScheme {
            l: p.region.dim() - m,
            sprime: p.region,
            candidates: p
                .candidates
                .into_iter()
                .map(|(u, t)| Candidate { u: UnimodularMatrix::new(u).expect("composed transforms are unimodular"), t })
                .collect(),
        })
        .collect();
    Ok(StructuralPartition { schemes })
}

struct Piece {
    /// Lives in the parameter space followed by this piece's auxiliaries.
    region: PartiallyOpenPolyhedron,
    candidates: Vec<(IntMatrix, AffineMap)>,
}

fn nonempty(p: &PartiallyOpenPolyhedron) -> bool {
    !p.is_trivially_empty() && is_feasible(p).is_some()
}

/// `f(p) <= g(p)` (or `<`) as a constraint on `p`.
fn compare(f: &(Vec<Rational>, Rational), g: &(Vec<Rational>, Rational), strict: bool) -> LinearConstraint {
    let a = f.0.iter().zip(&g.0).map(|(x, y)| x - y).collect();
    LinearConstraint::new(a, &g.1 - &f.1, strict)
}

fn scale_form(f: (Vec<Rational>, Rational), s: &Rational) -> (Vec<Rational>, Rational) {
    (f.0.into_iter().map(|x| x * s).collect(), f.1 * s)
}

/// Splits `region` by which form is largest (`largest = true`) or smallest,
/// ties going to the lowest index. Empty cells are dropped.
fn argext_split(
    forms: &[(Vec<Rational>, Rational)],
    region: &PartiallyOpenPolyhedron,
    largest: bool,
) -> Vec<(usize, PartiallyOpenPolyhedron)> {
    let mut out = Vec::new();
    for i in 0..forms.len() {
        if forms[..i].contains(&forms[i]) {
            continue;
        }
        let mut rows = region.constraints().to_vec();
        for (j, fj) in forms.iter().enumerate() {
            if j == i || *fj == forms[i] {
                continue;
            }
            // earlier indices lose ties
            let strict = j < i;
            rows.push(if largest { compare(fj, &forms[i], strict) } else { compare(&forms[i], fj, strict) });
        }
        let cell = simplify(region.dim(), rows);
        if nonempty(&cell) {
            out.push((i, cell));
        }
    }
    out
}

/// Pieces covering `region` for the system `M y <= beta(p)`.
fn stage(m: &RatMatrix, beta: &AffineMap, region: &PartiallyOpenPolyhedron, cfg: &Config) -> Result<Vec<Piece>> {
    if !nonempty(region) {
        return Ok(Vec::new());
    }
    let k = m.ncols();
    let d = region.dim();
    // rows without variables only decide emptiness; candidates are checked
    // against the full system anyway
    let live: Vec<usize> = (0..m.nrows()).filter(|&i| m.row(i).iter().any(|x| !x.is_zero())).collect();
    if k == 0 || live.is_empty() {
        return Ok(vec![Piece { region: region.clone(), candidates: vec![(IntMatrix::identity(k), AffineMap::zero(k, d))] }]);
    }
    let mm = m.select_rows(&live);
    let bb = beta.select_rows(&live);
    if k == 1 {
        return Ok(interval_stage(&mm, &bb, region));
    }
    if recession_interior(&mm) {
        return Ok(vec![unbounded_stage(&mm, &bb, region)?]);
    }
    debug_assert!(finite_width_test(&mm)?);
    width_stage(&mm, &bb, region, cfg)
}

/// One variable: the candidate is the ceiling of the highest lower bound, or
/// the floor of the lowest upper bound when there is no lower bound.
fn interval_stage(m: &RatMatrix, beta: &AffineMap, region: &PartiallyOpenPolyhedron) -> Vec<Piece> {
    let d = region.dim();
    let bound = |i: usize| scale_form(beta.row(i), &(Rational::one() / &m[(i, 0)]));
    let lower: Vec<usize> = (0..m.nrows()).filter(|&i| m[(i, 0)].is_negative()).collect();
    let (rows, sign) = if lower.is_empty() {
        ((0..m.nrows()).collect::<Vec<_>>(), -Rational::one())
    } else {
        (lower, Rational::one())
    };
    let forms: Vec<_> = rows.iter().map(|&i| bound(i)).collect();
    let u = IntMatrix::from_rows(vec![vec![if sign.is_positive() { BigInt::one() } else { -BigInt::one() }]], 1);
    argext_split(&forms, region, sign.is_positive())
        .into_iter()
        .map(|(i, cell)| {
            // floor(x) = -ceil(-x)
            let (coef, c0) = scale_form(forms[i].clone(), &sign);
            let t = AffineMap { matrix: RatMatrix::from_rows(vec![coef], d).expect("row length"), offset: vec![c0] };
            Piece { region: cell, candidates: vec![(u.clone(), t)] }
        })
        .collect()
}

/// Full-dimensional recession cone: rounding any vertex far enough along an
/// interior ray stays feasible, so one candidate per basis suffices.
fn unbounded_stage(m: &RatMatrix, beta: &AffineMap, region: &PartiallyOpenPolyhedron) -> Result<Piece> {
    let k = m.ncols();
    let minus_one = vec![-Rational::one(); m.nrows()];
    let ray = is_feasible(&PartiallyOpenPolyhedron::from_matrix(m, &minus_one)?).expect("interior recession direction");
    let lambda = m
        .rows_iter()
        .map(|r| r.iter().filter(|x| x.is_positive()).cloned().sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero);
    let mut candidates = Vec::new();
    for basis in enumerate_bases(m)? {
        let f = basic_solution_map(m, &basis);
        let mut t = beta.premul(&f);
        for (o, r) in t.offset.iter_mut().zip(&ray) {
            *o += &lambda * r;
        }
        candidates.push((IntMatrix::identity(k), t));
    }
    Ok(Piece { region: region.clone(), candidates })
}

/// Finite width: split by width direction, fix the first transformed
/// coordinate slab by slab and recurse.
fn width_stage(m: &RatMatrix, beta: &AffineMap, region: &PartiallyOpenPolyhedron, cfg: &Config) -> Result<Vec<Piece>> {
    let (k, d) = (m.ncols(), region.dim());
    let slabs = slab_count(k, cfg)?;
    let triples = flat_direction_triples(m)?;
    let forms: Vec<_> = triples.iter().map(|t| beta.form(&t.width_form())).collect();
    let mut out = Vec::new();
    for (i, cell) in argext_split(&forms, region, false) {
        let tr = &triples[i];
        let (_, u) = unimodular_for_direction(&tr.c)?;
        let u = u.into_inner();
        let mu = m.mul_int(&u);
        let col0 = mu.column(0);
        let rest = mu.select_cols(&(1..k).collect::<Vec<_>>());
        // z = ceil(c G beta(p)) becomes parameter d
        let (low, low0) = beta.form(&tr.lower_form());
        let mut a1 = low.clone();
        a1.push(-Rational::one());
        let mut a2: Vec<Rational> = low.iter().map(|x| -x).collect();
        a2.push(Rational::one());
        let mut base = cell.extend_dim(1);
        base.push(LinearConstraint::le(a1, -low0.clone()));
        base.push(LinearConstraint::lt(a2, Rational::one() + low0));
        if !nonempty(&base) {
            continue;
        }
        let lifted = beta.embed(d + 1, &(0..d).collect::<Vec<_>>());
        let mut subs = Vec::with_capacity(slabs);
        for j in 0..slabs {
            // beta(p) - col0 (z + j)
            let mut bj = lifted.clone();
            for (r, c) in col0.iter().enumerate() {
                bj.matrix[(r, d)] = -c;
                bj.offset[r] -= c * Rational::from_integer(BigInt::from(j));
            }
            subs.push(stage(&rest, &bj, &base, cfg)?);
        }
        combine(&subs, &base, &u, &mut out);
    }
    Ok(out)
}

/// Common refinement of the per-slab piece lists, each slab keeping its own
/// block of auxiliaries.
fn combine(subs: &[Vec<Piece>], base: &PartiallyOpenPolyhedron, u: &IntMatrix, out: &mut Vec<Piece>) {
    fn go(
        subs: &[Vec<Piece>],
        j: usize,
        acc: &PartiallyOpenPolyhedron,
        blocks: &mut Vec<(usize, usize)>,
        base_dim: usize,
        u: &IntMatrix,
        out: &mut Vec<Piece>,
    ) {
        if j == subs.len() {
            let dim = acc.dim();
            let mut candidates = Vec::new();
            for (slab, (choice, start)) in blocks.iter().enumerate() {
                let piece = &subs[slab][*choice];
                let sub_aux = piece.region.dim() - base_dim;
                let positions: Vec<usize> = (0..base_dim).chain(*start..*start + sub_aux).collect();
                for (us, ts) in &piece.candidates {
                    let ts = ts.embed(dim, &positions);
                    let mut mat = RatMatrix::zeros(ts.outputs() + 1, dim);
                    mat[(0, base_dim - 1)] = Rational::one();
                    let mut offset = vec![Rational::from_integer(BigInt::from(slab))];
                    for r in 0..ts.outputs() {
                        for c in 0..dim {
                            mat[(r + 1, c)] = ts.matrix[(r, c)].clone();
                        }
                        offset.push(ts.offset[r].clone());
                    }
                    let cand = (u.mul(&block_diag_one(us)), AffineMap { matrix: mat, offset });
                    if !candidates.contains(&cand) {
                        candidates.push(cand);
                    }
                }
            }
            out.push(Piece { region: acc.clone(), candidates });
            return;
        }
        for (s, piece) in subs[j].iter().enumerate() {
            let sub_aux = piece.region.dim() - base_dim;
            let start = acc.dim();
            let positions: Vec<usize> = (0..base_dim).chain(start..start + sub_aux).collect();
            let embedded = piece.region.embed(start + sub_aux, &positions);
            let next = simplify(start + sub_aux, acc.extend_dim(sub_aux).constraints().iter().chain(embedded.constraints()).cloned().collect::<Vec<_>>());
            if !nonempty(&next) {
                continue;
            }
            blocks.push((s, start));
            go(subs, j + 1, &next, blocks, base_dim, u, out);
            blocks.pop();
        }
    }
    go(subs, 0, base, &mut Vec::new(), base.dim(), u, out);
}

/// `diag(1, us)`.
fn block_diag_one(us: &IntMatrix) -> IntMatrix {
    let k = us.nrows() + 1;
    let mut rows = vec![vec![BigInt::zero(); k]; k];
    rows[0][0] = BigInt::one();
    for r in 0..us.nrows() {
        for c in 0..us.ncols() {
            rows[r + 1][c + 1] = us.row(r)[c].clone();
        }
    }
    IntMatrix::from_rows(rows, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rational::{rat, ratio};

    fn v(x: &[Rational]) -> Vec<Rational> {
        x.to_vec()
    }

    fn interval() -> RatMatrix {
        RatMatrix::from_i64(&[&[1], &[-1]])
    }

    fn box2() -> RatMatrix {
        RatMatrix::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
    }

    fn has_member(a: &RatMatrix, b: &[Rational], pts: &[Vec<BigInt>]) -> bool {
        let p = PartiallyOpenPolyhedron::from_matrix(a, b).unwrap();
        pts.iter().any(|x| p.contains(&x.iter().map(from_int).collect::<Vec<_>>()))
    }

    #[test]
    fn interval_scheme() {
        let cfg = Config::default();
        let q = PartiallyOpenPolyhedron::new(2, vec![LinearConstraint::ge(vec![rat(1), rat(1)], rat(0))]).unwrap();
        let sp = structural_partition(&interval(), &q, &cfg).unwrap();
        assert_eq!(sp.schemes.len(), 1);
        let s = &sp.schemes[0];
        assert_eq!(s.candidates.len(), 1);
        assert_eq!(s.candidates[0].t.apply(&[rat(7), rat(3)]), vec![rat(-3)]);
        let b = v(&[ratio(1, 2), ratio(-1, 4)]);
        let pts = evaluate_candidates(s, &b, &cfg).unwrap();
        assert_eq!(pts, vec![vec![BigInt::one()]]);
        assert!(!has_member(&interval(), &b, &pts));
        let b = v(&[ratio(5, 4), ratio(-1, 4)]);
        assert!(has_member(&interval(), &b, &evaluate_candidates(s, &b, &cfg).unwrap()));
        assert_eq!(evaluate_candidates(s, &[rat(3), rat(0)], &cfg).unwrap(), vec![vec![BigInt::zero()]]);
        assert_eq!(evaluate_candidates(s, &[rat(-3), rat(0)], &cfg).unwrap_err(), Error::NotInRegion);
    }

    #[test]
    fn box_schemes() {
        let cfg = Config::default();
        let q = PartiallyOpenPolyhedron::new(
            4,
            vec![
                LinearConstraint::ge(vec![rat(1), rat(1), rat(0), rat(0)], rat(0)),
                LinearConstraint::ge(vec![rat(0), rat(0), rat(1), rat(1)], rat(0)),
            ],
        )
        .unwrap();
        let sp = structural_partition(&box2(), &q, &cfg).unwrap();
        let (lmax, kmax) = scheme_size_bounds(2, 4, &cfg).unwrap();
        for s in &sp.schemes {
            assert!(s.l <= lmax && s.candidates.len() <= kmax);
        }
        let b = v(&[rat(1), ratio(1, 2), rat(1), ratio(1, 3)]);
        let hits = sp.locate_all(&b, &cfg).unwrap();
        assert_eq!(hits.len(), 1);
        let pts = evaluate_candidates(&sp.schemes[hits[0].0], &b, &cfg).unwrap();
        assert!(has_member(&box2(), &b, &pts));
        let b = v(&[ratio(1, 2), ratio(-1, 4), rat(1), rat(1)]);
        let hits = sp.locate_all(&b, &cfg).unwrap();
        assert_eq!(hits.len(), 1);
        let pts = evaluate_candidates(&sp.schemes[hits[0].0], &b, &cfg).unwrap();
        assert!(!has_member(&box2(), &b, &pts));
    }

    #[test]
    fn too_many_variables() {
        let cfg = Config { max_dim: 1, ..Config::default() };
        let q = PartiallyOpenPolyhedron::universe(4);
        assert_eq!(structural_partition(&box2(), &q, &cfg).unwrap_err(), Error::DimensionTooLarge(2, 1));
    }
}
