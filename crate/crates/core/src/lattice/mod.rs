//! Widths, lattice widths and the finite-width test.

pub mod hull;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::config::FlatnessTable;
use crate::error::{Error, Result};
use crate::numkernel::rational::{dot, format_rational, from_int, Rational};
use crate::numkernel::{normalize_full_column_rank, Normalized, RatMatrix};
use crate::polyhedron::{
    enumerate_bases, is_feasible, maximize_closed, ClosedLp, LinearConstraint, PartiallyOpenPolyhedron,
};

pub use hull::{cone_lattice_hull_vertices, integer_hull_vertex_superset, integer_points};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Width {
    Finite(Rational),
    Infinite,
}

impl Width {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Width::Finite(w) => Some(w),
            Width::Infinite => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Width::Finite(w) => serde_json::Value::String(format_rational(w)),
            Width::Infinite => serde_json::Value::String("inf".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthResult {
    pub width: Width,
    /// Coprime integral direction attaining the width, when finite.
    pub direction: Option<Vec<BigInt>>,
}

pub fn flatness_constant(n: usize, table: &FlatnessTable) -> Result<Rational> {
    table.get(n)
}

/// `sup c x - inf c x` over the closure of `p`.
pub fn width_along(p: &PartiallyOpenPolyhedron, c: &[BigInt]) -> Result<Width> {
    if c.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    if is_feasible(p).is_none() {
        return Err(Error::EmptyPolyhedron);
    }
    let cr: Vec<Rational> = c.iter().map(from_int).collect();
    Ok(closed_width(&p.closure(), &cr))
}

pub(crate) fn closed_width(p: &PartiallyOpenPolyhedron, c: &[Rational]) -> Width {
    let hi = match maximize_closed(p, c) {
        ClosedLp::Optimal { value, .. } => value,
        _ => return Width::Infinite,
    };
    let neg: Vec<Rational> = c.iter().map(|v| -v).collect();
    match maximize_closed(p, &neg) {
        ClosedLp::Optimal { value, .. } => Width::Finite(hi + value),
        _ => Width::Infinite,
    }
}

/// Whether `{x : A x <= b}` has finite lattice width for (every) `b` with a
/// non-empty polyhedron. This fails exactly when the recession cone
/// `{r : A r <= 0}` is full-dimensional, i.e. when `A r <= -1` is solvable.
pub fn finite_width_test(a: &RatMatrix) -> Result<bool> {
    if a.rank() < a.ncols() {
        return Err(Error::NotFullColumnRank);
    }
    Ok(!recession_interior(a))
}

pub(crate) fn recession_interior(a: &RatMatrix) -> bool {
    // zero rows never restrict a direction
    let rows: Vec<Vec<Rational>> = a.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let rhs = vec![-Rational::one(); rows.len()];
    !matches!(crate::polyhedron::maximize_rows(&rows, &rhs, &vec![Rational::zero(); a.ncols()]), ClosedLp::Infeasible)
}

/// The same test phrased over basis pairs: some pair `(N1, N2)` has
/// `cone(A_N1) ∩ -cone(A_N2) != {0}`.
pub fn finite_width_test_pairs(a: &RatMatrix) -> Result<bool> {
    let bases = enumerate_bases(a)?;
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            if pair_cone_nontrivial(a, &bases[i], &bases[j]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Constraint normals `g` with `cone(A_N1) ∩ -cone(A_N2) = {c : g c <= 0}`.
pub(crate) fn pair_cone_normals(a: &RatMatrix, n1: &[usize], n2: &[usize]) -> Vec<Vec<Rational>> {
    let i1 = a.select_rows(n1).inverse().expect("basis");
    let i2 = a.select_rows(n2).inverse().expect("basis");
    let mut gens = Vec::new();
    for j in 0..a.ncols() {
        gens.push(i1.column(j).into_iter().map(|v| -v).collect());
    }
    for j in 0..a.ncols() {
        gens.push(i2.column(j));
    }
    gens
}

fn pair_cone_nontrivial(a: &RatMatrix, n1: &[usize], n2: &[usize]) -> bool {
    let gens = pair_cone_normals(a, n1, n2);
    let n = a.ncols();
    // c D1 <= 0, c D2 <= 0, c D1 1 <= -1
    let mut p = PartiallyOpenPolyhedron::universe(n);
    let mut cut = vec![Rational::zero(); n];
    for g in &gens {
        p.push(LinearConstraint::le(g.clone(), Rational::zero()));
    }
    for g in &gens[..n] {
        for (c, v) in cut.iter_mut().zip(g) {
            *c += v;
        }
    }
    p.push(LinearConstraint::le(cut, -Rational::one()));
    is_feasible(&p).is_some()
}

/// Exact lattice width of the closure of `p` and a canonical optimal direction
/// (first non-zero component positive; ties broken lexicographically).
pub fn lattice_width(p: &PartiallyOpenPolyhedron) -> Result<WidthResult> {
    if is_feasible(p).is_none() {
        return Err(Error::EmptyPolyhedron);
    }
    let infinite = WidthResult { width: Width::Infinite, direction: None };
    let a = p.matrix();
    let b = p.rhs();
    let (reduced, u) = match normalize_full_column_rank(&a) {
        Normalized::NoVariables { .. } => return Ok(infinite),
        Normalized::Reduced { reduced, u, .. } => (reduced, u),
    };
    if recession_interior(&reduced) {
        return Ok(infinite);
    }
    let (w, d) = shortest_direction(&reduced, &b)?;
    // x = U y with the dropped coordinates free, so c = (d, 0) U^-1
    let mut dy = d;
    dy.resize(a.ncols(), BigInt::zero());
    let uinv = u.inverse();
    let mut c = vec![BigInt::zero(); a.ncols()];
    for (k, dk) in dy.iter().enumerate() {
        if dk.is_zero() {
            continue;
        }
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += dk * &uinv.matrix()[(k, j)];
        }
    }
    hull::canonical_sign(&mut c);
    debug_assert!(hull::is_primitive(&c));
    Ok(WidthResult { width: Width::Finite(w), direction: Some(c) })
}

/// Vertices of the pointed polyhedron `{A x <= b}` (full column rank `A`).
pub(crate) fn vertices(a: &RatMatrix, b: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let closed = PartiallyOpenPolyhedron::from_matrix(a, b)?;
    let mut out = std::collections::BTreeSet::new();
    for basis in enumerate_bases(a)? {
        let rhs: Vec<Rational> = basis.iter().map(|&i| b[i].clone()).collect();
        let v = a.select_rows(&basis).solve(&rhs).expect("basis is non-singular");
        if closed.contains(&v) {
            out.insert(v);
        }
    }
    Ok(out.into_iter().collect())
}

/// Minimum of `max c x - min c x` over non-zero integral `c`, for a non-empty
/// pointed polyhedron with finite lattice width.
///
/// Directions are enumerated depth-first inside
/// `{c : |c (v_i - v_j)| <= W, c r = 0}` (vertices `v`, recession rays `r`),
/// shrinking `W` whenever a better direction turns up.
pub(crate) fn shortest_direction(a: &RatMatrix, b: &[Rational]) -> Result<(Rational, Vec<BigInt>)> {
    let n = a.ncols();
    let verts = vertices(a, b)?;
    let rays = hull::cone_rays(&a.to_rows(), n);
    let mut diffs = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let d: Vec<Rational> = verts[i].iter().zip(&verts[j]).map(|(x, y)| x - y).collect();
            if d.iter().any(|v| !v.is_zero()) {
                diffs.push(d);
            }
        }
    }
    let rays_r: Vec<Vec<Rational>> = rays.iter().map(|r| r.iter().map(from_int).collect()).collect();
    // lower-dimensional: any integral normal of the affine hull has width 0
    let span: Vec<Vec<Rational>> = diffs.iter().chain(&rays_r).cloned().collect();
    let span = if span.is_empty() { RatMatrix::zeros(1, n) } else { RatMatrix::from_rows(span, n)? };
    if span.rank() < n {
        let normal = span.null_space().swap_remove(0);
        let mut c = crate::numkernel::rational::primitive_integral(&normal).0;
        hull::canonical_sign(&mut c);
        return Ok((Rational::zero(), c));
    }
    let eval = |c: &[BigInt]| -> Option<Rational> {
        let cr: Vec<Rational> = c.iter().map(from_int).collect();
        if rays_r.iter().any(|r| !dot(&cr, r).is_zero()) {
            return None;
        }
        Some(diffs.iter().map(|d| dot(&cr, d).abs()).max().unwrap_or_else(Rational::zero))
    };
    let mut best: Option<(Rational, Vec<BigInt>)> = None;
    let offer = |c: Vec<BigInt>, best: &mut Option<(Rational, Vec<BigInt>)>| {
        let mut c = c;
        hull::canonical_sign(&mut c);
        if let Some(w) = eval(&c) {
            let better = match best {
                None => true,
                Some((bw, bc)) => w < *bw || (w == *bw && c < *bc),
            };
            if better {
                *best = Some((w, c));
            }
        }
    };
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        offer(e, &mut best);
    }
    for row in a.rows_iter() {
        offer(crate::numkernel::rational::primitive_integral(row).0, &mut best);
    }
    if best.is_none() {
        return Err(Error::InfiniteLatticeWidth);
    }
    let mut prefix = Vec::new();
    search(&diffs, &rays_r, n, &mut prefix, &mut best, &eval);
    Ok(best.expect("seeded above"))
}

fn search(
    diffs: &[Vec<Rational>],
    rays: &[Vec<Rational>],
    n: usize,
    prefix: &mut Vec<BigInt>,
    best: &mut Option<(Rational, Vec<BigInt>)>,
    eval: &dyn Fn(&[BigInt]) -> Option<Rational>,
) {
    let k = prefix.len();
    if k == n {
        if prefix.iter().all(Zero::is_zero) {
            return;
        }
        if let Some(w) = eval(prefix) {
            let (bw, bc) = best.as_ref().expect("seeded");
            if w < *bw || (w == *bw && *prefix < *bc) {
                *best = Some((w, prefix.clone()));
            }
        }
        return;
    }
    let w = best.as_ref().expect("seeded").0.clone();
    // K_W with the prefix substituted; remaining variables c_k..c_{n-1}
    let fixed = |row: &[Rational]| -> (Vec<Rational>, Rational) {
        let mut s = Rational::zero();
        for (ri, pi) in row.iter().zip(prefix.iter()) {
            s += ri * from_int(pi);
        }
        (row[k..].to_vec(), s)
    };
    let mut sys = PartiallyOpenPolyhedron::universe(n - k);
    for d in diffs {
        let (rest, s) = fixed(d);
        sys.push(LinearConstraint::le(rest.clone(), &w - &s));
        sys.push(LinearConstraint::le(rest.iter().map(|v| -v).collect(), &w + &s));
    }
    for r in rays {
        let (rest, s) = fixed(r);
        sys.push(LinearConstraint::le(rest.clone(), -s.clone()));
        sys.push(LinearConstraint::le(rest.iter().map(|v| -v).collect(), s));
    }
    if sys.is_trivially_empty() {
        return;
    }
    let mut e = vec![Rational::zero(); n - k];
    e[0] = Rational::one();
    let hi = match maximize_closed(&sys, &e) {
        ClosedLp::Optimal { value, .. } => crate::numkernel::rational::floor(&value),
        ClosedLp::Infeasible => return,
        ClosedLp::Unbounded => unreachable!("direction set is bounded"),
    };
    e[0] = -Rational::one();
    let mut lo = match maximize_closed(&sys, &e) {
        ClosedLp::Optimal { value, .. } => crate::numkernel::rational::ceil(&-value),
        ClosedLp::Infeasible => return,
        ClosedLp::Unbounded => unreachable!("direction set is bounded"),
    };
    // canonical sign: the first non-zero entry is positive
    if prefix.iter().all(Zero::is_zero) && lo < BigInt::zero() {
        lo = BigInt::zero();
    }
    let mut v = lo;
    while v <= hi {
        prefix.push(v.clone());
        search(diffs, rays, n, prefix, best, eval);
        prefix.pop();
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rational::{rat, ratio};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn unit_square() -> PartiallyOpenPolyhedron {
        PartiallyOpenPolyhedron::boxed(&[rat(0), rat(0)], &[rat(1), rat(1)])
    }

    fn triangle(s: Rational) -> PartiallyOpenPolyhedron {
        PartiallyOpenPolyhedron::new(
            2,
            vec![
                LinearConstraint::le(vec![rat(-1), rat(0)], rat(0)),
                LinearConstraint::le(vec![rat(0), rat(-1)], rat(0)),
                LinearConstraint::le(vec![rat(1), rat(1)], s),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flatness_defaults() {
        let t = FlatnessTable::default();
        assert_eq!(flatness_constant(1, &t).unwrap(), rat(1));
        assert_eq!(flatness_constant(2, &t).unwrap(), rat(3));
        assert_eq!(flatness_constant(3, &t).unwrap(), rat(16));
        assert!(flatness_constant(4, &t).is_err());
    }

    #[test]
    fn width_along_examples() {
        assert_eq!(width_along(&unit_square(), &bi(&[1, 0])).unwrap(), Width::Finite(rat(1)));
        assert_eq!(width_along(&unit_square(), &bi(&[1, 1])).unwrap(), Width::Finite(rat(2)));
        let ray = PartiallyOpenPolyhedron::new(1, vec![LinearConstraint::le(vec![rat(-1)], rat(0))]).unwrap();
        assert_eq!(width_along(&ray, &bi(&[1])).unwrap(), Width::Infinite);
        assert_eq!(width_along(&PartiallyOpenPolyhedron::empty(1), &bi(&[1])).unwrap_err(), Error::EmptyPolyhedron);
    }

    #[test]
    fn lattice_width_examples() {
        let w = lattice_width(&unit_square()).unwrap();
        assert_eq!(w.width, Width::Finite(rat(1)));
        let d = w.direction.unwrap();
        assert!(d == bi(&[1, 0]) || d == bi(&[0, 1]));
        assert_eq!(lattice_width(&triangle(rat(1))).unwrap().width, Width::Finite(rat(1)));
        assert_eq!(lattice_width(&triangle(ratio(1, 2))).unwrap().width, Width::Finite(ratio(1, 2)));
        let strip = PartiallyOpenPolyhedron::new(
            2,
            vec![LinearConstraint::le(vec![rat(1), rat(1)], rat(1)), LinearConstraint::le(vec![rat(-1), rat(-1)], rat(0))],
        )
        .unwrap();
        let w = lattice_width(&strip).unwrap();
        assert_eq!(w.width, Width::Finite(rat(1)));
        assert_eq!(w.direction, Some(bi(&[1, 1])));
        let cone = PartiallyOpenPolyhedron::new(
            2,
            vec![LinearConstraint::le(vec![rat(1), rat(1)], rat(0)), LinearConstraint::le(vec![rat(1), rat(-1)], rat(0))],
        )
        .unwrap();
        assert_eq!(lattice_width(&cone).unwrap().width, Width::Infinite);
    }

    #[test]
    fn finite_width_examples() {
        let boxm = RatMatrix::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(finite_width_test(&boxm).unwrap());
        assert!(finite_width_test_pairs(&boxm).unwrap());
        let open = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert!(!finite_width_test(&open).unwrap());
        assert!(!finite_width_test_pairs(&open).unwrap());
        let line = RatMatrix::from_i64(&[&[1], &[-1]]);
        assert!(finite_width_test(&line).unwrap());
        let half_line = RatMatrix::from_i64(&[&[2], &[0]]);
        assert!(!finite_width_test(&half_line).unwrap());
        assert!(!finite_width_test_pairs(&half_line).unwrap());
        assert!(finite_width_test(&RatMatrix::from_i64(&[&[1, 1]])).is_err());
    }
}
