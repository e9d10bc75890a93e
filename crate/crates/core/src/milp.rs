//! Integer and mixed-integer feasibility in fixed dimension by branching on
//! hyperplanes along flat directions.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::io::rat_vec_json;
use crate::lattice::{recession_interior, shortest_direction};
use crate::numkernel::rational::{ceil, floor, from_int, primitive_integral, Rational};
use crate::numkernel::{normalize_full_column_rank, unimodular_for_direction, Normalized, RatMatrix};
use crate::polyhedron::{fm_eliminate_many, is_feasible, maximize_closed, simplify, ClosedLp, LinearConstraint, PartiallyOpenPolyhedron};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MipProblem {
    pub p: PartiallyOpenPolyhedron,
    /// Variables required to be integral.
    pub int_indices: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub status: Status,
    pub witness: Option<Vec<Rational>>,
}

impl FeasibilityResult {
    fn from_point(x: Option<Vec<Rational>>) -> Self {
        match x {
            Some(w) => FeasibilityResult { status: Status::Feasible, witness: Some(w) },
            None => FeasibilityResult { status: Status::Infeasible, witness: None },
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    pub fn to_json(&self) -> Value {
        match &self.witness {
            Some(w) => json!({"status": "Feasible", "witness": rat_vec_json(w)}),
            None => json!({"status": "Infeasible"}),
        }
    }
}

/// Rewrites every row as `a x <= beta` with `a` primitive integral and `beta`
/// integral. Integral points are unchanged.
pub fn tighten(p: &PartiallyOpenPolyhedron) -> PartiallyOpenPolyhedron {
    let rows = p.constraints().iter().map(|c| {
        let (a, f) = primitive_integral(&c.a);
        let beta = &c.beta * &f;
        let rhs = if c.strict { ceil(&beta) - BigInt::one() } else { floor(&beta) };
        LinearConstraint::le(a.iter().map(from_int).collect(), from_int(&rhs))
    });
    simplify(p.dim(), rows.collect::<Vec<_>>())
}

/// Number of slabs visited at each depth, for bound checks.
#[derive(Clone, Debug, Default)]
pub struct SlabLog {
    pub max_slabs: Vec<(usize, usize)>,
}

/// Decides `P ∩ Z^n != ∅` and returns an integral witness when it is.
pub fn integer_feasible(p: &PartiallyOpenPolyhedron, cfg: &Config) -> Result<FeasibilityResult> {
    integer_feasible_logged(p, cfg, &mut SlabLog::default())
}

/// As [`integer_feasible`], recording `(dimension, slab count)` per branching step.
pub fn integer_feasible_logged(p: &PartiallyOpenPolyhedron, cfg: &Config, log: &mut SlabLog) -> Result<FeasibilityResult> {
    let x = solve(p, cfg, log)?;
    let x = x.map(|v| v.iter().map(from_int).collect::<Vec<_>>());
    if let Some(w) = &x {
        debug_assert!(p.contains(w));
    }
    Ok(FeasibilityResult::from_point(x))
}

fn solve(p: &PartiallyOpenPolyhedron, cfg: &Config, log: &mut SlabLog) -> Result<Option<Vec<BigInt>>> {
    let n = p.dim();
    let p = tighten(p);
    if p.is_trivially_empty() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let x0 = match is_feasible(&p) {
        Some(x) => x,
        None => return Ok(None),
    };
    if n == 1 {
        return Ok(solve_interval(&p));
    }
    let a = p.matrix();
    let b = p.rhs();
    match normalize_full_column_rank(&a) {
        Normalized::NoVariables { .. } => return Ok(Some(vec![BigInt::zero(); n])),
        Normalized::Reduced { reduced, u, dropped } if dropped > 0 => {
            let sub = PartiallyOpenPolyhedron::from_matrix(&reduced, &b)?;
            return Ok(solve(&sub, cfg, log)?.map(|y| {
                let mut y = y;
                y.resize(n, BigInt::zero());
                u.matrix().mul_vec(&y)
            }));
        }
        Normalized::Reduced { .. } => {}
    }
    if let Some(x) = unit_box_point(&a, &x0) {
        return Ok(Some(x));
    }
    let (c, lo, hi) = branching_direction(&p, &a, &b, cfg)?;
    let (g, u) = unimodular_for_direction(&c)?;
    debug_assert!(g.is_one());
    let ur = u.matrix().to_rat();
    let py = p.substitute(&ur, &vec![Rational::zero(); n]);
    let count = if hi >= lo { (&hi - &lo + 1u32).to_usize().unwrap_or(usize::MAX) } else { 0 };
    log.max_slabs.push((n, count));
    let mut j = lo;
    while j <= hi {
        let slab = py.fix_variable(0, &from_int(&j));
        if let Some(rest) = solve(&slab, cfg, log)? {
            let mut y = vec![j.clone()];
            y.extend(rest);
            return Ok(Some(u.matrix().mul_vec(&y)));
        }
        j += 1;
    }
    Ok(None)
}

fn solve_interval(p: &PartiallyOpenPolyhedron) -> Option<Vec<BigInt>> {
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for c in p.constraints() {
        let a = &c.a[0];
        if a.is_positive() {
            let h = floor(&(&c.beta / a));
            if hi.as_ref().is_none_or(|x| h < *x) {
                hi = Some(h);
            }
        } else if a.is_negative() {
            let l = ceil(&(&c.beta / a));
            if lo.as_ref().is_none_or(|x| l > *x) {
                lo = Some(l);
            }
        }
    }
    let v = match (lo, hi) {
        (Some(l), Some(h)) if l > h => return None,
        (Some(l), _) => l,
        (None, Some(h)) => h.min(BigInt::zero()),
        (None, None) => BigInt::zero(),
    };
    Some(vec![v])
}

/// When `{r : A r <= -1}` is non-empty, the cone of recession directions holds
/// a unit box far enough out; its rounded-up corner is an integral point.
fn unit_box_point(a: &RatMatrix, x0: &[Rational]) -> Option<Vec<BigInt>> {
    if !recession_interior(a) {
        return None;
    }
    let rows = a.to_rows();
    let rhs = vec![-Rational::one(); rows.len()];
    let r = match crate::polyhedron::maximize_rows(&rows, &rhs, &vec![Rational::zero(); a.ncols()]) {
        ClosedLp::Optimal { x, .. } => x,
        _ => return None,
    };
    let lambda = rows
        .iter()
        .map(|row| row.iter().filter(|v| v.is_positive()).cloned().sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero);
    Some(x0.iter().zip(&r).map(|(x, d)| ceil(&(x + &lambda * d))).collect())
}

/// A direction with finite width and the range of slab values to try.
fn branching_direction(
    p: &PartiallyOpenPolyhedron,
    a: &RatMatrix,
    b: &[Rational],
    cfg: &Config,
) -> Result<(Vec<BigInt>, BigInt, BigInt)> {
    let n = p.dim();
    let extent = |c: &[BigInt]| -> Option<(Rational, Rational)> {
        let cr: Vec<Rational> = c.iter().map(from_int).collect();
        let hi = match maximize_closed(p, &cr) {
            ClosedLp::Optimal { value, .. } => value,
            _ => return None,
        };
        let neg: Vec<Rational> = cr.iter().map(|v| -v).collect();
        match maximize_closed(p, &neg) {
            ClosedLp::Optimal { value, .. } => Some((-value, hi)),
            _ => None,
        }
    };
    if let Ok(omega) = cfg.flatness.get(n) {
        let (_, c) = shortest_direction(a, b)?;
        let (lo, hi) = extent(&c).expect("width direction has finite extent");
        // a scaled copy of P with lattice width omega sits below lo + omega
        let top = floor(&(&lo + &omega));
        let hi_i = floor(&hi).min(top);
        let lo_i = ceil(&lo);
        debug_assert!(&hi_i - &lo_i < ceil(&omega) + 1);
        return Ok((c, lo_i, hi_i));
    }
    let mut cands: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            e
        })
        .collect();
    cands.extend(a.rows_iter().map(|r| primitive_integral(r).0));
    let mut best: Option<(Rational, Vec<BigInt>, Rational, Rational)> = None;
    for c in cands {
        if let Some((lo, hi)) = extent(&c) {
            let w = &hi - &lo;
            if best.as_ref().is_none_or(|(bw, ..)| w < *bw) {
                best = Some((w, c, lo, hi));
            }
        }
    }
    let (_, c, lo, hi) = best.ok_or(Error::InfiniteLatticeWidth)?;
    Ok((c, ceil(&lo), floor(&hi)))
}

/// Rewrites the system so that a continuous variable fixed by an explicit
/// equality pair `a x <= beta, -a x <= -beta` occurs in that pair only. The
/// solution set is unchanged.
fn isolate_equalities(p: &PartiallyOpenPolyhedron, cont: &[usize]) -> PartiallyOpenPolyhedron {
    let mut rows: Vec<LinearConstraint> = p.constraints().iter().map(LinearConstraint::normalized).collect();
    let mut used: Vec<usize> = Vec::new();
    for &k in cont {
        let pair = rows.iter().enumerate().find_map(|(i, r)| {
            if r.strict || r.a[k].is_zero() || used.contains(&i) {
                return None;
            }
            let neg = r.negated();
            rows.iter().enumerate().find(|(j, s)| *j != i && !s.strict && s.a == neg.a && s.beta == -&r.beta).map(|(j, _)| (i, j))
        });
        let Some((i, j)) = pair else { continue };
        let eq = rows[i].clone();
        for (t, r) in rows.iter_mut().enumerate() {
            if t == i || t == j || r.a[k].is_zero() {
                continue;
            }
            let f = &r.a[k] / &eq.a[k];
            for (x, e) in r.a.iter_mut().zip(&eq.a) {
                *x -= &f * e;
            }
            r.beta -= &f * &eq.beta;
        }
        used.extend([i, j]);
    }
    simplify(p.dim(), rows)
}

/// Decides feasibility with integrality on `int_indices` only. Continuous
/// variables are projected out first and restored afterwards.
pub fn mixed_integer_feasible(m: &MipProblem, cfg: &Config) -> Result<FeasibilityResult> {
    let n = m.p.dim();
    let mut ints = m.int_indices.clone();
    ints.sort_unstable();
    ints.dedup();
    if let Some(&bad) = ints.iter().find(|&&i| i >= n) {
        return Err(Error::Dimension(format!("integer index {bad} out of range for {n} variables")));
    }
    if ints.is_empty() {
        return Ok(FeasibilityResult::from_point(is_feasible(&m.p)));
    }
    let cont: Vec<usize> = (0..n).filter(|i| !ints.contains(i)).collect();
    if cont.is_empty() {
        return integer_feasible(&m.p, cfg);
    }
    let sys = isolate_equalities(&m.p, &cont);
    let (proj, trace) = fm_eliminate_many(&sys, &cont, true);
    let r = integer_feasible(&proj, cfg)?;
    let Some(z) = r.witness else {
        return Ok(FeasibilityResult::from_point(None));
    };
    let x = trace.lift(&z).expect("projection points lift");
    debug_assert!(m.p.contains(&x));
    Ok(FeasibilityResult::from_point(Some(x)))
}
