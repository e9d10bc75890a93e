//! Integral points and integer-hull vertices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numkernel::rational::{ceil, dot, floor, from_int, primitive_integral, Rational};
use crate::numkernel::RatMatrix;
use crate::polyhedron::{combinations, is_feasible, maximize_closed, ClosedLp, LinearConstraint, PartiallyOpenPolyhedron};

/// All integral points of a bounded polyhedron, by coordinate-wise LP bounds.
/// Fails with `LimitExceeded` once more than `limit` points are found.
pub fn integer_points(p: &PartiallyOpenPolyhedron, limit: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect_points(p, &mut prefix, &mut out, limit)?;
    Ok(out)
}

fn collect_points(
    p: &PartiallyOpenPolyhedron,
    prefix: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
    limit: usize,
) -> Result<()> {
    if p.is_trivially_empty() {
        return Ok(());
    }
    if p.dim() == 0 {
        out.push(prefix.clone());
        if out.len() > limit {
            return Err(Error::LimitExceeded(format!("more than {limit} integral points")));
        }
        return Ok(());
    }
    let mut e = vec![Rational::zero(); p.dim()];
    e[0] = Rational::one();
    let hi = match maximize_closed(p, &e) {
        ClosedLp::Infeasible => return Ok(()),
        ClosedLp::Unbounded => return Err(Error::LimitExceeded("unbounded enumeration".into())),
        ClosedLp::Optimal { value, .. } => floor(&value),
    };
    e[0] = -Rational::one();
    let lo = match maximize_closed(p, &e) {
        ClosedLp::Optimal { value, .. } => ceil(&-value),
        ClosedLp::Infeasible => return Ok(()),
        ClosedLp::Unbounded => return Err(Error::LimitExceeded("unbounded enumeration".into())),
    };
    let mut k = lo;
    while k <= hi {
        prefix.push(k.clone());
        collect_points(&p.fix_variable(0, &from_int(&k)), prefix, out, limit)?;
        prefix.pop();
        k += 1;
    }
    Ok(())
}

fn int_to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(from_int).collect()
}

/// Whether `x` lies in `conv(others) + cone`, the cone given as `{r : g r <= 0}`.
fn in_hull_plus_cone(x: &[BigInt], others: &[&Vec<BigInt>], cone: &[Vec<Rational>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let h = others.len();
    let xr = int_to_rat(x);
    let mut rows = Vec::new();
    for i in 0..h {
        let mut v = vec![Rational::zero(); h];
        v[i] = -Rational::one();
        rows.push(LinearConstraint::le(v, Rational::zero()));
    }
    rows.push(LinearConstraint::le(vec![Rational::one(); h], Rational::one()));
    rows.push(LinearConstraint::le(vec![-Rational::one(); h], -Rational::one()));
    let others_r: Vec<Vec<Rational>> = others.iter().map(|o| int_to_rat(o)).collect();
    if cone.is_empty() {
        // plain convex hull: x = sum mu_h h, coordinate by coordinate
        for j in 0..x.len() {
            let coeffs: Vec<Rational> = others_r.iter().map(|o| o[j].clone()).collect();
            rows.push(LinearConstraint::le(coeffs.clone(), xr[j].clone()));
            rows.push(LinearConstraint::ge(coeffs, xr[j].clone()));
        }
    } else {
        // g (x - sum mu_h h) <= 0
        for g in cone {
            let coeffs: Vec<Rational> = others_r.iter().map(|o| -dot(g, o)).collect();
            rows.push(LinearConstraint::le(coeffs, -dot(g, &xr)));
        }
    }
    let sys = PartiallyOpenPolyhedron::new(h, rows).expect("rows sized to h");
    is_feasible(&sys).is_some()
}

/// Extreme rays (primitive integral) of the pointed cone `{c : g c <= 0}`.
pub fn cone_rays(gens: &[Vec<Rational>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rays = BTreeSet::new();
    if n == 0 {
        return Vec::new();
    }
    for s in combinations(gens.len(), n - 1) {
        let m = RatMatrix::from_rows(s.iter().map(|&i| gens[i].clone()).collect(), n).expect("rows of length n");
        if m.rank() != n - 1 {
            continue;
        }
        let r = m.null_space().swap_remove(0);
        for sign in [1i64, -1] {
            let rr: Vec<Rational> = r.iter().map(|v| v * Rational::from_integer(sign.into())).collect();
            if gens.iter().all(|g| !dot(g, &rr).is_positive()) {
                rays.insert(primitive_integral(&rr).0);
            }
        }
    }
    rays.into_iter().collect()
}

/// Lattice points of `{lambda R : 0 <= lambda <= 1}` for linearly independent rows `R`.
fn parallelepiped_points(rays: &[&Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let d = rays.len();
    let r = RatMatrix::from_rows(rays.iter().map(|v| int_to_rat(v)).collect(), n).expect("rows of length n");
    let cols = combinations(n, d)
        .into_iter()
        .find(|j| !r.select_cols(j).det().is_zero())
        .expect("independent rows have a non-singular minor");
    let rinv = r.select_cols(&cols).inverse().expect("non-singular minor");
    let mut p = PartiallyOpenPolyhedron::universe(n);
    for k in 0..d {
        let mut a = vec![Rational::zero(); n];
        for (ji, &j) in cols.iter().enumerate() {
            a[j] = rinv[(ji, k)].clone();
        }
        p.push(LinearConstraint::le(a.clone(), Rational::one()));
        p.push(LinearConstraint::ge(a, Rational::zero()));
    }
    for v in r.null_space() {
        p.push(LinearConstraint::le(v.clone(), Rational::zero()));
        p.push(LinearConstraint::ge(v, Rational::zero()));
    }
    integer_points(&p, 1_000_000).expect("parallelepipeds are bounded and small")
}

/// Vertices of `conv((K ∩ Z^n) \ {0})` for the pointed cone `K = {c : g c <= 0}`.
///
/// Every such vertex is an element of the Hilbert basis of `K`, and every
/// Hilbert basis element sits in a fundamental parallelepiped of some
/// simplicial subcone spanned by extreme rays, so the enumeration is exact.
pub fn cone_lattice_hull_vertices(gens: &[Vec<Rational>], n: usize) -> Vec<Vec<BigInt>> {
    let rays = cone_rays(gens, n);
    if rays.is_empty() {
        return Vec::new();
    }
    let ray_m = RatMatrix::from_rows(rays.iter().map(|v| int_to_rat(v)).collect(), n).unwrap();
    let d = ray_m.rank();
    let mut cands: BTreeSet<Vec<BigInt>> = rays.iter().cloned().collect();
    for t in combinations(rays.len(), d) {
        let sub: Vec<&Vec<BigInt>> = t.iter().map(|&i| &rays[i]).collect();
        let sm = RatMatrix::from_rows(sub.iter().map(|v| int_to_rat(v)).collect(), n).unwrap();
        if sm.rank() != d {
            continue;
        }
        for pnt in parallelepiped_points(&sub, n) {
            if pnt.iter().any(|v| !v.is_zero()) {
                cands.insert(pnt);
            }
        }
    }
    let in_cone = |v: &[BigInt]| {
        let vr = int_to_rat(v);
        gens.iter().all(|g| !dot(g, &vr).is_positive())
    };
    let cands: Vec<Vec<BigInt>> = cands.into_iter().collect();
    let minimal: Vec<Vec<BigInt>> = cands
        .iter()
        .filter(|c| {
            !cands.iter().any(|h| {
                h != *c && {
                    let diff: Vec<BigInt> = c.iter().zip(h.iter()).map(|(a, b)| a - b).collect();
                    in_cone(&diff)
                }
            })
        })
        .cloned()
        .collect();
    minimal
        .iter()
        .filter(|c| {
            let others: Vec<&Vec<BigInt>> = minimal.iter().filter(|h| h != c).collect();
            !in_hull_plus_cone(c, &others, gens)
        })
        .cloned()
        .collect()
}

/// Integral points of `P` with `|x_i| <= bound`, filtered to those not in the
/// convex hull of the others. Always a superset of the integer-hull vertices
/// that lie in the box.
pub fn integer_hull_vertex_superset(p: &PartiallyOpenPolyhedron, bound: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let n = p.dim();
    let lo = vec![from_int(&-bound); n];
    let hi = vec![from_int(bound); n];
    let boxed = p.closure().intersect(&PartiallyOpenPolyhedron::boxed(&lo, &hi));
    let pts: Vec<Vec<BigInt>> = integer_points(&boxed, 2_000_000)?
        .into_iter()
        .filter(|x| p.contains(&int_to_rat(x)))
        .collect();
    // cheap pass: a point between two others along a short direction is no vertex
    let set: BTreeSet<&Vec<BigInt>> = pts.iter().collect();
    let mut dirs: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        dirs.push(e.clone());
        for j in i + 1..n {
            for s in [1i64, -1] {
                let mut f = e.clone();
                f[j] = BigInt::from(s);
                dirs.push(f);
            }
        }
    }
    let survivors: Vec<&Vec<BigInt>> = pts
        .iter()
        .filter(|x| {
            !dirs.iter().any(|d| {
                let plus: Vec<BigInt> = x.iter().zip(d).map(|(a, b)| a + b).collect();
                let minus: Vec<BigInt> = x.iter().zip(d).map(|(a, b)| a - b).collect();
                set.contains(&plus) && set.contains(&minus)
            })
        })
        .collect();
    Ok(survivors
        .iter()
        .filter(|x| {
            let others: Vec<&Vec<BigInt>> = survivors.iter().filter(|o| o != x).copied().collect();
            !in_hull_plus_cone(x, &others, &[])
        })
        .map(|x| (*x).clone())
        .collect())
}

pub(crate) fn is_primitive(c: &[BigInt]) -> bool {
    crate::numkernel::rational::gcd_all(c.iter()).is_one()
}

pub(crate) fn canonical_sign(c: &mut [BigInt]) {
    if let Some(f) = c.iter().find(|v| !v.is_zero()) {
        if f.is_negative() {
            c.iter_mut().for_each(|v| *v = -v.clone());
        }
    }
}
