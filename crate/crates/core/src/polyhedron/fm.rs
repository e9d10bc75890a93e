//! Fourier–Motzkin elimination with light redundancy control.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::lp::{maximize_closed, maximize_rows_from, ClosedLp};
use super::{is_feasible, LinearConstraint, PartiallyOpenPolyhedron};
use crate::numkernel::rational::Rational;
use crate::numkernel::RatMatrix;

/// Normalizes rows and keeps only the tightest row per direction.
pub fn simplify(dim: usize, rows: impl IntoIterator<Item = LinearConstraint>) -> PartiallyOpenPolyhedron {
    let mut out: Vec<LinearConstraint> = Vec::new();
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    for r in rows {
        match r.constant_truth() {
            Some(true) => continue,
            Some(false) => return PartiallyOpenPolyhedron::empty(dim),
            None => {}
        }
        let r = r.normalized();
        match seen.get(&r.a) {
            Some(&i) => {
                let cur = &mut out[i];
                if r.beta < cur.beta || (r.beta == cur.beta && r.strict) {
                    *cur = r;
                }
            }
            None => {
                seen.insert(r.a.clone(), out.len());
                out.push(r);
            }
        }
    }
    PartiallyOpenPolyhedron::new(dim, out).expect("rows keep the dimension")
}

/// Projects out variable `k`. A combined row is strict when either parent is.
pub fn fm_eliminate(p: &PartiallyOpenPolyhedron, k: usize) -> PartiallyOpenPolyhedron {
    assert!(k < p.dim(), "variable index out of range");
    let dim = p.dim() - 1;
    if p.is_trivially_empty() {
        return PartiallyOpenPolyhedron::empty(dim);
    }
    let drop_k = |a: &[Rational]| -> Vec<Rational> {
        let mut v = a.to_vec();
        v.remove(k);
        v
    };
    let mut rows = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for c in p.constraints() {
        let ak = &c.a[k];
        if ak.is_zero() {
            rows.push(LinearConstraint::new(drop_k(&c.a), c.beta.clone(), c.strict));
        } else if ak.is_positive() {
            pos.push(c);
        } else {
            neg.push(c);
        }
    }
    for u in &pos {
        let fu = u.a[k].recip();
        for l in &neg {
            let fl = -l.a[k].recip();
            let a: Vec<Rational> = u.a.iter().zip(&l.a).map(|(x, y)| x * &fu + y * &fl).collect();
            let beta = &u.beta * &fu + &l.beta * &fl;
            rows.push(LinearConstraint::new(drop_k(&a), beta, u.strict || l.strict));
        }
    }
    simplify(dim, rows)
}

/// Drops rows implied by the remaining ones (checked by exact LP on the
/// closure of the others, so strict rows are only dropped with slack).
pub fn remove_redundant(p: &PartiallyOpenPolyhedron) -> PartiallyOpenPolyhedron {
    if p.is_trivially_empty() {
        return p.clone();
    }
    if is_feasible(p).is_none() {
        return PartiallyOpenPolyhedron::empty(p.dim());
    }
    let n = p.dim();
    let mut keep: Vec<LinearConstraint> = p.constraints().to_vec();
    let full_rank = n > 0 && p.matrix().rank() == n;
    // one feasible point serves every test: dropping rows only enlarges the set
    let x0 = match (full_rank, maximize_closed(&p.closure(), &vec![Rational::zero(); n])) {
        (true, ClosedLp::Optimal { x, .. }) => Some(x),
        _ => None,
    };
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<LinearConstraint> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
        let row = &keep[i];
        let best = match &x0 {
            Some(x0) => {
                let a: Vec<Vec<Rational>> = others.iter().map(|c| c.a.clone()).collect();
                let b: Vec<Rational> = others.iter().map(|c| c.beta.clone()).collect();
                if a.is_empty() || RatMatrix::from_rows(a.clone(), n).expect("row length").rank() < n {
                    // dropping the row opens a line along which it is violated
                    ClosedLp::Unbounded
                } else {
                    maximize_rows_from(&a, &b, &row.a, x0.clone())
                }
            }
            None => maximize_closed(&PartiallyOpenPolyhedron::new(n, others).expect("same dimension"), &row.a),
        };
        let redundant = match best {
            ClosedLp::Optimal { value, .. } => value < row.beta || (value == row.beta && !row.strict),
            _ => false,
        };
        if redundant {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    PartiallyOpenPolyhedron::new(p.dim(), keep).expect("same dimension")
}

/// Record of a multi-variable elimination, enough to lift points back.
#[derive(Clone, Debug)]
pub struct FmTrace {
    /// `(k, system)`: variable `k` of `system` was eliminated next.
    steps: Vec<(usize, PartiallyOpenPolyhedron)>,
}

impl FmTrace {
    /// Extends a point of the projection to a point of the original system,
    /// with eliminated coordinates restored at their original positions.
    pub fn lift(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        let mut x = point.to_vec();
        for (k, sys) in self.steps.iter().rev() {
            let v = lift_value(sys, *k, &x)?;
            x.insert(*k, v);
        }
        Some(x)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Eliminates the variables `vars` (original indices). Remaining variables keep
/// their relative order. With `prune`, LP-redundant rows are dropped after any
/// step that increases the row count.
pub fn fm_eliminate_many(p: &PartiallyOpenPolyhedron, vars: &[usize], prune: bool) -> (PartiallyOpenPolyhedron, FmTrace) {
    let mut current = p.clone();
    let mut labels: Vec<usize> = (0..p.dim()).collect();
    let mut pending: Vec<usize> = vars.to_vec();
    pending.sort_unstable();
    pending.dedup();
    let mut steps = Vec::new();
    while !pending.is_empty() {
        // cheapest variable first: fewest generated rows
        let (pi, k) = pending
            .iter()
            .enumerate()
            .map(|(pi, &v)| (pi, labels.iter().position(|&l| l == v).expect("label present")))
            .min_by_key(|&(_, k)| {
                let (mut pos, mut neg) = (0usize, 0usize);
                for c in current.constraints() {
                    if c.a[k].is_positive() {
                        pos += 1;
                    } else if c.a[k].is_negative() {
                        neg += 1;
                    }
                }
                (pos * neg) as isize - (pos + neg) as isize
            })
            .expect("pending is non-empty");
        pending.remove(pi);
        let next = fm_eliminate(&current, k);
        // LP pruning only pays off once the system starts to grow
        let next = if prune && next.num_constraints() > current.num_constraints() { remove_redundant(&next) } else { next };
        steps.push((k, current));
        labels.remove(k);
        current = next;
    }
    (current, FmTrace { steps })
}

/// A value for variable `k` making `p` hold once the other coordinates are
/// fixed to `rest` (given in order, without `k`).
pub fn lift_value(p: &PartiallyOpenPolyhedron, k: usize, rest: &[Rational]) -> Option<Rational> {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for c in p.constraints() {
        let mut s = c.beta.clone();
        let mut j = 0;
        for (i, ai) in c.a.iter().enumerate() {
            if i == k {
                continue;
            }
            if !ai.is_zero() {
                s -= ai * &rest[j];
            }
            j += 1;
        }
        let ak = &c.a[k];
        if ak.is_zero() {
            let ok = if c.strict { s.is_positive() } else { !s.is_negative() };
            if !ok {
                return None;
            }
            continue;
        }
        let bound = &s / ak;
        if ak.is_positive() {
            let better = match &hi {
                None => true,
                Some((h, hs)) => bound < *h || (bound == *h && c.strict && !hs),
            };
            if better {
                hi = Some((bound, c.strict));
            }
        } else {
            let better = match &lo {
                None => true,
                Some((l, ls)) => bound > *l || (bound == *l && c.strict && !ls),
            };
            if better {
                lo = Some((bound, c.strict));
            }
        }
    }
    match (lo, hi) {
        (None, None) => Some(Rational::zero()),
        (Some((l, ls)), None) => Some(if ls { l + Rational::one() } else { l }),
        (None, Some((h, hs))) => Some(if hs { h - Rational::one() } else { h }),
        (Some((l, ls)), Some((h, hs))) => {
            if l < h {
                Some((l + h) / Rational::from_integer(2.into()))
            } else if l == h && !ls && !hs {
                Some(l)
            } else {
                None
            }
        }
    }
}
