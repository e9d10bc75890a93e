//! Exhaustive reference implementations for testing. Nothing here calls into
//! the lattice, milp, structural, decide or gap algorithms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Width, WidthResult};
use crate::numkernel::rational::{ceil, floor, from_int, Rational};
use crate::numkernel::RatMatrix;
use crate::polyhedron::{is_feasible, lp_optimize, LpStatus, PartiallyOpenPolyhedron, Sense};

/// An integral box `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBox {
    pub lower: Vec<BigInt>,
    pub upper: Vec<BigInt>,
}

impl IntBox {
    pub fn new(lower: Vec<BigInt>, upper: Vec<BigInt>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension("box bounds differ in length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Parse("box lower bound exceeds upper bound".into()));
        }
        Ok(IntBox { lower, upper })
    }

    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        IntBox { lower: vec![BigInt::from(lo); n], upper: vec![BigInt::from(hi); n] }
    }

    /// Every integral point of the box in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        let n = self.lower.len();
        let empty = self.lower.iter().zip(&self.upper).any(|(l, u)| l > u);
        let mut cur: Option<Vec<BigInt>> = if empty { None } else { Some(self.lower.clone()) };
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = n;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if next[i] < self.upper[i] {
                    next[i] += 1;
                    cur = Some(next);
                    break;
                }
                next[i] = self.lower[i].clone();
            }
            Some(out)
        })
    }
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(from_int).collect()
}

/// Integral points of `P` inside `bx`, by testing every box point.
pub fn brute_int_points(p: &PartiallyOpenPolyhedron, bx: &IntBox) -> Vec<Vec<BigInt>> {
    bx.points().filter(|x| p.contains(&to_rat(x))).collect()
}

/// Integral bounding box of a bounded polyhedron from coordinate LPs.
pub fn bounding_box(p: &PartiallyOpenPolyhedron) -> Option<IntBox> {
    let n = p.dim();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        let up = lp_optimize(p, &e, Sense::Max);
        let down = lp_optimize(p, &e, Sense::Min);
        if up.status != LpStatus::Finite || down.status != LpStatus::Finite {
            return None;
        }
        lo.push(ceil(down.value.as_ref()?));
        hi.push(floor(up.value.as_ref()?));
    }
    // an empty range yields a box without points
    Some(IntBox { lower: lo, upper: hi })
}

/// Whether a bounded `P` has an integral point, by exhaustive enumeration.
/// `None` when `P` is unbounded.
pub fn brute_has_int_point(p: &PartiallyOpenPolyhedron) -> Option<Option<Vec<BigInt>>> {
    if is_feasible(p).is_none() {
        return Some(None);
    }
    let n = p.dim();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        if lp_optimize(p, &e, Sense::Max).status != LpStatus::Finite || lp_optimize(p, &e, Sense::Min).status != LpStatus::Finite {
            return None;
        }
    }
    let bx = bounding_box(p)?;
    let found = bx.points().find(|x| p.contains(&to_rat(x)));
    Some(found)
}

fn lp_width(p: &PartiallyOpenPolyhedron, c: &[Rational]) -> Option<Rational> {
    let up = lp_optimize(p, c, Sense::Max);
    let down = lp_optimize(p, c, Sense::Min);
    match (up.value, down.value) {
        (Some(u), Some(d)) if up.status == LpStatus::Finite && down.status == LpStatus::Finite => Some(u - d),
        _ => None,
    }
}

/// Minimum width over non-zero integral `c` with `|c_i| <= norm_bound`. Ties
/// go to the lexicographically smallest direction with a positive leading entry.
pub fn brute_lattice_width(p: &PartiallyOpenPolyhedron, norm_bound: u32) -> Result<WidthResult> {
    if is_feasible(p).is_none() {
        return Err(Error::EmptyPolyhedron);
    }
    let n = p.dim();
    let nb = i64::from(norm_bound);
    let closure = p.closure();
    let mut best: Option<(Rational, Vec<BigInt>)> = None;
    for c in IntBox::cube(n, -nb, nb).points() {
        match c.iter().find(|v| !v.is_zero()) {
            Some(f) if f.is_positive() => {}
            _ => continue,
        }
        if let Some(w) = lp_width(&closure, &to_rat(&c)) {
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, c));
            }
        }
    }
    Ok(match best {
        Some((w, c)) => WidthResult { width: Width::Finite(w), direction: Some(c) },
        None => WidthResult { width: Width::Infinite, direction: None },
    })
}

/// `{x : A x <= b}` as a polyhedron.
pub fn fiber(a: &RatMatrix, b: &[Rational]) -> PartiallyOpenPolyhedron {
    PartiallyOpenPolyhedron::from_matrix(a, b).expect("b matches the rows of A")
}

/// Finite grid of right-hand sides: the product of per-coordinate value lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub values: Vec<Vec<Rational>>,
}

impl Grid {
    /// `lo, lo + step, ..., <= hi` in every one of `dim` coordinates.
    pub fn uniform(dim: usize, lo: &Rational, hi: &Rational, step: &Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::Parse("grid step must be positive".into()));
        }
        let mut axis = Vec::new();
        let mut v = lo.clone();
        while v <= *hi {
            axis.push(v.clone());
            v += step;
        }
        Ok(Grid { values: vec![axis; dim] })
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Rational>> + '_ {
        let lens: Vec<i64> = self.values.iter().map(|v| v.len() as i64 - 1).collect();
        let idx = IntBox { lower: vec![BigInt::zero(); lens.len()], upper: lens.iter().map(|&l| BigInt::from(l)).collect() };
        let empty = lens.iter().any(|&l| l < 0);
        let all: Vec<Vec<BigInt>> = if empty { Vec::new() } else { idx.points().collect() };
        all.into_iter().map(move |ix| {
            ix.iter()
                .enumerate()
                .map(|(k, i)| self.values[k][usize::try_from(i.clone()).expect("grid index")].clone())
                .collect()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridOutcome {
    HoldsOnGrid,
    Counterexample { b: Vec<Rational>, z: Vec<BigInt> },
}

/// Checks every grid `b` with some `z` in `zbox` and `(b, z) in Q`. Right-hand
/// sides with unbounded fibers are skipped.
pub fn brute_forall_exists(a: &RatMatrix, q: &PartiallyOpenPolyhedron, grid: &Grid, zbox: &IntBox) -> Result<GridOutcome> {
    let (m, p) = (a.nrows(), zbox.lower.len());
    if q.dim() != m + p || grid.values.len() != m {
        return Err(Error::Dimension("grid, box and Q disagree in arity".into()));
    }
    for b in grid.points() {
        for z in zbox.points() {
            let mut bz = b.clone();
            bz.extend(z.iter().map(from_int));
            if !q.contains(&bz) {
                continue;
            }
            if let Some(None) = brute_has_int_point(&fiber(a, &b)) {
                return Ok(GridOutcome::Counterexample { b, z });
            }
            break;
        }
    }
    Ok(GridOutcome::HoldsOnGrid)
}

/// Largest `LP(b) - IP(b)` over grid points with a bounded LP and an integral
/// point in `P_b`.
pub fn brute_gap(a: &RatMatrix, c: &[Rational], grid: &Grid) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for b in grid.points() {
        let p = fiber(a, &b);
        let lp = lp_optimize(&p, c, Sense::Max);
        if lp.status != LpStatus::Finite {
            continue;
        }
        let Some(bx) = bounding_box(&p) else { continue };
        let ip = bx.points().filter(|x| p.contains(&to_rat(x))).map(|x| crate::numkernel::rational::dot(c, &to_rat(&x))).max();
        if let (Some(lpv), Some(ipv)) = (lp.value, ip) {
            let g = lpv - ipv;
            if best.as_ref().is_none_or(|bg| g > *bg) {
                best = Some(g);
            }
        }
    }
    best.ok_or(Error::NoFeasibleGridPoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rational::{rat, ratio};
    use crate::polyhedron::LinearConstraint;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn int_points_examples() {
        let sq = PartiallyOpenPolyhedron::boxed(&[rat(0), rat(0)], &[rat(1), rat(1)]);
        let pts = brute_int_points(&sq, &IntBox::cube(2, -1, 2));
        assert_eq!(pts, vec![bi(&[0, 0]), bi(&[0, 1]), bi(&[1, 0]), bi(&[1, 1])]);
        let tri = PartiallyOpenPolyhedron::new(
            2,
            vec![
                LinearConstraint::ge(vec![rat(2), rat(0)], rat(1)),
                LinearConstraint::ge(vec![rat(0), rat(2)], rat(1)),
                LinearConstraint::le(vec![rat(2), rat(2)], rat(3)),
            ],
        )
        .unwrap();
        assert!(brute_int_points(&tri, &IntBox::cube(2, 0, 1)).is_empty());
        let open: Vec<LinearConstraint> = sq.constraints().iter().map(|c| LinearConstraint::lt(c.a.clone(), c.beta.clone())).collect();
        let open = PartiallyOpenPolyhedron::new(2, open).unwrap();
        assert!(brute_int_points(&open, &IntBox::cube(2, -1, 2)).is_empty());
    }

    #[test]
    fn width_examples() {
        let sq = PartiallyOpenPolyhedron::boxed(&[rat(0), rat(0)], &[rat(1), rat(1)]);
        assert_eq!(brute_lattice_width(&sq, 2).unwrap().width, Width::Finite(rat(1)));
        let simplex = PartiallyOpenPolyhedron::new(
            2,
            vec![
                LinearConstraint::ge(vec![rat(1), rat(0)], rat(0)),
                LinearConstraint::ge(vec![rat(0), rat(1)], rat(0)),
                LinearConstraint::le(vec![rat(1), rat(1)], rat(1)),
            ],
        )
        .unwrap();
        assert_eq!(brute_lattice_width(&simplex, 3).unwrap().width, Width::Finite(rat(1)));
        let tall = PartiallyOpenPolyhedron::boxed(&[rat(0), rat(0)], &[rat(1), rat(5)]);
        let w = brute_lattice_width(&tall, 2).unwrap();
        assert_eq!(w.width, Width::Finite(rat(1)));
        assert_eq!(w.direction, Some(bi(&[1, 0])));
        let half = sq.scale(&ratio(1, 2)).unwrap();
        assert_eq!(brute_lattice_width(&half, 2).unwrap().width, Width::Finite(ratio(1, 2)));
    }

    fn interval() -> RatMatrix {
        RatMatrix::from_i64(&[&[1], &[-1]])
    }

    fn sum_at_least(beta: Rational) -> PartiallyOpenPolyhedron {
        PartiallyOpenPolyhedron::new(2, vec![LinearConstraint::ge(vec![rat(1), rat(1)], beta)]).unwrap()
    }

    #[test]
    fn forall_exists_grid() {
        let grid = Grid { values: vec![(0..=8).map(|k| ratio(k, 4)).collect(), (-4..=8).map(|k| ratio(k, 4)).collect()] };
        let none = IntBox::new(vec![], vec![]).unwrap();
        assert_eq!(brute_forall_exists(&interval(), &sum_at_least(rat(1)), &grid, &none).unwrap(), GridOutcome::HoldsOnGrid);
        match brute_forall_exists(&interval(), &sum_at_least(ratio(1, 2)), &grid, &none).unwrap() {
            GridOutcome::Counterexample { b, .. } => assert!(&b[0] + &b[1] >= ratio(1, 2)),
            GridOutcome::HoldsOnGrid => panic!("expected a counterexample"),
        }
        let far = Grid { values: vec![vec![rat(-5)], vec![rat(-5)]] };
        assert_eq!(brute_forall_exists(&interval(), &sum_at_least(rat(1)), &far, &none).unwrap(), GridOutcome::HoldsOnGrid);
    }

    #[test]
    fn gap_grid() {
        let grid = Grid { values: vec![(0..=8).map(|k| ratio(k, 4)).collect(), vec![rat(0)]] };
        assert_eq!(brute_gap(&interval(), &[rat(1)], &grid).unwrap(), ratio(3, 4));
        let ints = Grid { values: vec![(0..=3).map(rat).collect(), vec![rat(0)]] };
        assert_eq!(brute_gap(&interval(), &[rat(1)], &ints).unwrap(), rat(0));
        let bad = Grid { values: vec![vec![rat(-1)], vec![rat(0)]] };
        assert_eq!(brute_gap(&interval(), &[rat(1)], &bad).unwrap_err(), Error::NoFeasibleGridPoint);
    }
}
