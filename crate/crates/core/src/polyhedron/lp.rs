//! Exact linear programming over `{x : A x <= b}` with free variables.
//!
//! The solver walks vertices: a basis is a set of `n` linearly independent
//! tight rows, the multipliers `y = c A_B^-1` price them, and Bland's rule
//! (smallest row index for both choices) guarantees termination.

use num_traits::{One, Signed, Zero};

use super::{LinearConstraint, PartiallyOpenPolyhedron};
use crate::numkernel::rational::{dot, Rational};
use crate::numkernel::RatMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedLp {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Infeasible,
    Unbounded,
    Finite,
}

/// Supremum (or infimum) of a linear function over a partially open polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub attained: bool,
    pub point: Option<Vec<Rational>>,
}

impl LpOutcome {
    fn infeasible() -> Self {
        LpOutcome { status: LpStatus::Infeasible, value: None, attained: false, point: None }
    }
}

fn sub_scaled(v: &mut [Rational], w: &[Rational], f: &Rational) {
    if f.is_zero() {
        return;
    }
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x -= y * f;
        }
    }
}

enum Purified {
    Unbounded,
    Vertex { x: Vec<Rational>, basis: Vec<usize> },
}

struct System<'a> {
    a: &'a [Vec<Rational>],
    b: &'a [Rational],
    n: usize,
}

impl System<'_> {
    /// Moves a feasible point to a vertex without decreasing `c x`.
    fn purify(&self, c: &[Rational], mut x: Vec<Rational>) -> Purified {
        let mut basis: Vec<usize> = Vec::new();
        let mut slack: Vec<Rational> = self.a.iter().zip(self.b).map(|(r, bi)| bi - dot(r, &x)).collect();
        // greedily collect independent tight rows
        let mut chosen = RatMatrix::zeros(0, self.n);
        for (i, s) in slack.iter().enumerate() {
            if basis.len() == self.n {
                break;
            }
            if s.is_zero() {
                let cand = chosen.stack(&RatMatrix::from_rows(vec![self.a[i].clone()], self.n).unwrap());
                if cand.rank() > chosen.nrows() {
                    chosen = cand;
                    basis.push(i);
                }
            }
        }
        while basis.len() < self.n {
            let mut d = chosen.null_space().swap_remove(0);
            let cd = dot(c, &d);
            if cd.is_negative() {
                d.iter_mut().for_each(|v| *v = -v.clone());
            }
            let mut step = self.ratio(&d, &slack, &basis);
            if step.is_none() {
                if cd.is_zero() {
                    d.iter_mut().for_each(|v| *v = -v.clone());
                    step = self.ratio(&d, &slack, &basis);
                } else {
                    return Purified::Unbounded;
                }
            }
            let (j, t) = step.expect("full column rank blocks one of the two directions");
            self.advance(&mut x, &mut slack, &d, &t);
            chosen = chosen.stack(&RatMatrix::from_rows(vec![self.a[j].clone()], self.n).unwrap());
            basis.push(j);
        }
        Purified::Vertex { x, basis }
    }

    /// Smallest step along `d` that makes a non-basic row tight; ties go to the
    /// smallest row index.
    fn ratio(&self, d: &[Rational], slack: &[Rational], basis: &[usize]) -> Option<(usize, Rational)> {
        let mut best: Option<(usize, Rational)> = None;
        for (j, row) in self.a.iter().enumerate() {
            if basis.contains(&j) {
                continue;
            }
            let ad = dot(row, d);
            if !ad.is_positive() {
                continue;
            }
            let t = &slack[j] / ad;
            if best.as_ref().is_none_or(|(_, bt)| t < *bt) {
                best = Some((j, t));
            }
        }
        best
    }

    fn advance(&self, x: &mut [Rational], slack: &mut [Rational], d: &[Rational], t: &Rational) {
        if t.is_zero() {
            return;
        }
        for (xi, di) in x.iter_mut().zip(d) {
            if !di.is_zero() {
                *xi += di * t;
            }
        }
        for (s, row) in slack.iter_mut().zip(self.a) {
            let ad = dot(row, d);
            if !ad.is_zero() {
                *s -= ad * t;
            }
        }
    }

    fn simplex(&self, c: &[Rational], mut x: Vec<Rational>, mut basis: Vec<usize>) -> ClosedLp {
        let n = self.n;
        let ab = RatMatrix::from_rows(basis.iter().map(|&i| self.a[i].clone()).collect(), n).unwrap();
        let mut binv = ab.inverse().expect("basis rows are independent");
        let mut slack: Vec<Rational> = self.a.iter().zip(self.b).map(|(r, bi)| bi - dot(r, &x)).collect();
        loop {
            let y = binv.vec_mul(c);
            let leave = (0..n).filter(|&k| y[k].is_negative()).min_by_key(|&k| basis[k]);
            let Some(k) = leave else {
                let value = dot(c, &x);
                return ClosedLp::Optimal { x, value };
            };
            let d: Vec<Rational> = binv.column(k).into_iter().map(|v| -v).collect();
            let Some((j, t)) = self.ratio(&d, &slack, &basis) else {
                return ClosedLp::Unbounded;
            };
            self.advance(&mut x, &mut slack, &d, &t);
            // rank-one update of the inverse for row k replaced by row j
            let ajd = dot(&self.a[j], &d);
            let mut w = binv.vec_mul(&self.a[j]);
            w[k] -= Rational::one();
            for (r, dr) in d.iter().enumerate() {
                if dr.is_zero() {
                    continue;
                }
                sub_scaled(binv.row_mut(r), &w, &(dr / &ajd));
            }
            basis[k] = j;
        }
    }

    fn optimize_from(&self, c: &[Rational], x0: Vec<Rational>) -> ClosedLp {
        match self.purify(c, x0) {
            Purified::Unbounded => ClosedLp::Unbounded,
            Purified::Vertex { x, basis } => self.simplex(c, x, basis),
        }
    }
}

/// Any point of `{x : A x <= b}`; `A` must have full column rank.
fn find_feasible(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let most_violated = b.iter().filter(|v| v.is_negative()).map(|v| -v).max();
    let Some(s0) = most_violated else {
        return Some(vec![Rational::zero(); n]);
    };
    // A x - s <= b, s >= 0, maximize -s
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.push(-Rational::one());
            v
        })
        .collect();
    let mut rhs = b.to_vec();
    let mut sneg = vec![Rational::zero(); n + 1];
    sneg[n] = -Rational::one();
    rows.push(sneg.clone());
    rhs.push(Rational::zero());
    let sys = System { a: &rows, b: &rhs, n: n + 1 };
    let mut x0 = vec![Rational::zero(); n + 1];
    x0[n] = s0;
    match sys.optimize_from(&sneg, x0) {
        ClosedLp::Optimal { mut x, value } if value.is_zero() => {
            x.truncate(n);
            Some(x)
        }
        _ => None,
    }
}

/// Maximizes `c x` over `{x : A x <= b}` for arbitrary `A`.
pub fn maximize_rows(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> ClosedLp {
    let n = c.len();
    if n == 0 || a.is_empty() {
        if b.iter().any(|v| v.is_negative()) {
            return ClosedLp::Infeasible;
        }
        if c.iter().any(|v| !v.is_zero()) {
            return ClosedLp::Unbounded;
        }
        return ClosedLp::Optimal { x: vec![Rational::zero(); n], value: Rational::zero() };
    }
    let mut rows = a.to_vec();
    let mut rhs = b.to_vec();
    let mut unbounded_if_feasible = false;
    let lineality = RatMatrix::from_rows(a.to_vec(), n).expect("rows share a length").null_space();
    for v in lineality {
        if !dot(c, &v).is_zero() {
            unbounded_if_feasible = true;
        }
        rows.push(v.iter().map(|x| -x).collect());
        rhs.push(Rational::zero());
        rows.push(v);
        rhs.push(Rational::zero());
    }
    let Some(x0) = find_feasible(&rows, &rhs, n) else {
        return ClosedLp::Infeasible;
    };
    if unbounded_if_feasible {
        return ClosedLp::Unbounded;
    }
    System { a: &rows, b: &rhs, n }.optimize_from(c, x0)
}

/// As [`maximize_rows`] from a known feasible `x0`; `A` must have full column rank.
pub(crate) fn maximize_rows_from(a: &[Vec<Rational>], b: &[Rational], c: &[Rational], x0: Vec<Rational>) -> ClosedLp {
    System { a, b, n: c.len() }.optimize_from(c, x0)
}

/// Maximizes over the closure of `p`, ignoring strictness.
pub fn maximize_closed(p: &PartiallyOpenPolyhedron, c: &[Rational]) -> ClosedLp {
    assert_eq!(c.len(), p.dim(), "objective arity mismatch");
    let a: Vec<Vec<Rational>> = p.constraints().iter().map(|r| r.a.clone()).collect();
    maximize_rows(&a, &p.rhs(), c)
}

/// A point of `p` (strict rows respected), or `None` when `p` is empty.
pub fn is_feasible(p: &PartiallyOpenPolyhedron) -> Option<Vec<Rational>> {
    if p.is_trivially_empty() {
        return None;
    }
    let n = p.dim();
    if !p.has_strict() {
        return match maximize_closed(p, &vec![Rational::zero(); n]) {
            ClosedLp::Optimal { x, .. } => Some(x),
            _ => None,
        };
    }
    // one slack t for all strict rows: a x + t <= beta, t <= 1, maximize t
    let mut rows = Vec::with_capacity(p.num_constraints() + 1);
    let mut rhs = Vec::with_capacity(p.num_constraints() + 1);
    for c in p.constraints() {
        let mut v = c.a.clone();
        v.push(if c.strict { Rational::one() } else { Rational::zero() });
        rows.push(v);
        rhs.push(c.beta.clone());
    }
    let mut top = vec![Rational::zero(); n + 1];
    top[n] = Rational::one();
    rows.push(top.clone());
    rhs.push(Rational::one());
    match maximize_rows(&rows, &rhs, &top) {
        ClosedLp::Optimal { mut x, value } if value.is_positive() => {
            x.truncate(n);
            Some(x)
        }
        _ => None,
    }
}

/// Exact supremum/infimum of `c x` over `p` with an attainment flag.
pub fn lp_optimize(p: &PartiallyOpenPolyhedron, c: &[Rational], sense: Sense) -> LpOutcome {
    let obj: Vec<Rational> = match sense {
        Sense::Max => c.to_vec(),
        Sense::Min => c.iter().map(|v| -v).collect(),
    };
    let closed = maximize_closed(p, &obj);
    if closed == ClosedLp::Infeasible {
        return LpOutcome::infeasible();
    }
    let strict = p.has_strict();
    if strict && is_feasible(p).is_none() {
        return LpOutcome::infeasible();
    }
    match closed {
        ClosedLp::Infeasible => unreachable!(),
        ClosedLp::Unbounded => LpOutcome { status: LpStatus::Unbounded, value: None, attained: false, point: None },
        ClosedLp::Optimal { x, value } => {
            let point = if strict {
                is_feasible(&p.with(LinearConstraint::ge(obj.clone(), value.clone())))
            } else {
                Some(x)
            };
            let value = if sense == Sense::Min { -value } else { value };
            LpOutcome { status: LpStatus::Finite, value: Some(value), attained: point.is_some(), point }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rational::{rat, ratio};
    use crate::polyhedron::combinations;

    fn poly(rows: &[(&[i64], i64, bool)]) -> PartiallyOpenPolyhedron {
        let n = rows[0].0.len();
        PartiallyOpenPolyhedron::new(
            n,
            rows.iter().map(|(a, b, s)| LinearConstraint::new(a.iter().map(|&v| rat(v)).collect(), rat(*b), *s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let p = poly(&[(&[1], 1, false), (&[-1], 0, false)]);
        let w = is_feasible(&p).unwrap();
        assert!(p.contains(&w));
        assert!(is_feasible(&poly(&[(&[1], 0, true), (&[-1], 0, true)])).is_none());
        assert!(is_feasible(&poly(&[(&[1], 1, true), (&[-1], -1, false)])).is_none());
        assert!(is_feasible(&poly(&[(&[1, 1], -3, false), (&[-1, 0], 5, false)])).is_some());
    }

    #[test]
    fn optimize_examples() {
        let sq = PartiallyOpenPolyhedron::boxed(&[rat(0), rat(0)], &[rat(1), rat(1)]);
        let o = lp_optimize(&sq, &[rat(1), rat(0)], Sense::Max);
        assert_eq!((o.status, o.value.clone(), o.attained), (LpStatus::Finite, Some(rat(1)), true));
        let open = poly(&[(&[1], 1, true)]);
        let o = lp_optimize(&open, &[rat(1)], Sense::Max);
        assert_eq!((o.status, o.value, o.attained), (LpStatus::Finite, Some(rat(1)), false));
        let ray = poly(&[(&[-1], 0, false)]);
        assert_eq!(lp_optimize(&ray, &[rat(1)], Sense::Max).status, LpStatus::Unbounded);
        assert_eq!(lp_optimize(&ray, &[rat(1)], Sense::Min).value, Some(rat(0)));
        let line = poly(&[(&[1, 1], 2, false), (&[-1, -1], -2, false)]);
        assert_eq!(lp_optimize(&line, &[rat(1), rat(1)], Sense::Max).value, Some(rat(2)));
        assert_eq!(lp_optimize(&line, &[rat(1), rat(0)], Sense::Max).status, LpStatus::Unbounded);
        let half_open = poly(&[(&[1, 0], 1, true), (&[-1, 0], 0, false), (&[0, 1], 1, false), (&[0, -1], 0, false)]);
        let o = lp_optimize(&half_open, &[rat(0), rat(1)], Sense::Max);
        assert!(o.attained);
        assert!(half_open.contains(o.point.as_ref().unwrap()));
        let o = lp_optimize(&half_open, &[ratio(1, 2), rat(1)], Sense::Max);
        assert_eq!((o.value, o.attained), (Some(ratio(3, 2)), false));
    }

    #[test]
    fn degenerate_cycling_instance() {
        // Beale's example in inequality form; Bland's rule must terminate.
        let p = PartiallyOpenPolyhedron::new(
            4,
            vec![
                LinearConstraint::le(vec![ratio(1, 4), rat(-60), ratio(-1, 25), rat(9)], rat(0)),
                LinearConstraint::le(vec![ratio(1, 2), rat(-90), ratio(-1, 50), rat(3)], rat(0)),
                LinearConstraint::le(vec![rat(0), rat(0), rat(1), rat(0)], rat(1)),
                LinearConstraint::ge(vec![rat(1), rat(0), rat(0), rat(0)], rat(0)),
                LinearConstraint::ge(vec![rat(0), rat(1), rat(0), rat(0)], rat(0)),
                LinearConstraint::ge(vec![rat(0), rat(0), rat(1), rat(0)], rat(0)),
                LinearConstraint::ge(vec![rat(0), rat(0), rat(0), rat(1)], rat(0)),
            ],
        )
        .unwrap();
        let o = lp_optimize(&p, &[ratio(3, 4), rat(-150), ratio(1, 50), rat(-6)], Sense::Max);
        assert_eq!(o.value, Some(ratio(1, 20)));
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(n..=7);
            let rows: Vec<LinearConstraint> = (0..m)
                .map(|_| {
                    LinearConstraint::le(
                        (0..n).map(|_| rat(rng.gen_range(-5..=5))).collect(),
                        rat(rng.gen_range(-3..=8)),
                    )
                })
                .collect();
            let p = PartiallyOpenPolyhedron::new(n, rows).unwrap();
            let c: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
            let got = maximize_closed(&p, &c);
            let a = p.matrix();
            let b = p.rhs();
            let mut best: Option<Rational> = None;
            for s in combinations(p.num_constraints(), n) {
                let sub = a.select_rows(&s);
                let rhs: Vec<Rational> = s.iter().map(|&i| b[i].clone()).collect();
                if let Some(x) = sub.solve(&rhs) {
                    if p.contains(&x) {
                        let v = dot(&c, &x);
                        if best.as_ref().is_none_or(|bv| v > *bv) {
                            best = Some(v);
                        }
                    }
                }
            }
            let feasible = is_feasible(&p).is_some();
            match got {
                ClosedLp::Infeasible => assert!(!feasible),
                ClosedLp::Unbounded => assert!(feasible),
                ClosedLp::Optimal { x, value } => {
                    assert!(p.contains(&x));
                    assert_eq!(dot(&c, &x), value);
                    if a.rank() == n {
                        assert_eq!(Some(value), best);
                    }
                }
            }
        }
    }
}
