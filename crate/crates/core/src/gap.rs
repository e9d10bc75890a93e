//! The integer programming gap `sup_b (LP(b) - IP(b))` of `max {c x : A x <= b}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::config::Config;
use crate::decide::{decide_forall_exists, ForAllExistsInstance, Verdict};
use crate::error::{Error, Result};
use crate::io::rat_vec_json;
use crate::numkernel::rational::{format_rational, from_int, rational_reconstruct, Rational};
use crate::numkernel::RatMatrix;
use crate::milp::integer_feasible;
use crate::polyhedron::{combinations, fm_eliminate_many, lp_optimize, LinearConstraint, LpStatus, PartiallyOpenPolyhedron, Sense};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    pub a: RatMatrix,
    pub c: Vec<Rational>,
}

impl GapInstance {
    pub fn new(a: RatMatrix, c: Vec<Rational>) -> Result<Self> {
        if c.len() != a.ncols() {
            return Err(Error::Dimension(format!("c has {} entries, expected {}", c.len(), a.ncols())));
        }
        Ok(GapInstance { a, c })
    }

    pub fn scaled(&self, lambda: &Rational) -> GapInstance {
        GapInstance { a: self.a.clone(), c: self.c.iter().map(|x| x * lambda).collect() }
    }
}

/// A right-hand side with `LP(b) >= beta` and no integral `x` with
/// `c x >= beta - gamma`, while `A x <= b` has integral points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub b: Vec<Rational>,
    pub beta: Rational,
    pub gamma: Rational,
}

impl GapWitness {
    pub fn to_json(&self) -> Value {
        json!({"b": rat_vec_json(&self.b), "beta": format_rational(&self.beta), "gamma": format_rational(&self.gamma)})
    }

    /// Re-checks the certificate: `LP(b) >= beta`, `P_b` has integral points,
    /// none of them with `c x >= beta - gamma`.
    pub fn verify(&self, inst: &GapInstance, cfg: &Config) -> Result<bool> {
        if self.b.len() != inst.a.nrows() {
            return Ok(false);
        }
        let p = PartiallyOpenPolyhedron::from_matrix(&inst.a, &self.b)?;
        let lp = lp_optimize(&p, &inst.c, Sense::Max);
        let lp_ok = match lp.status {
            LpStatus::Finite => lp.value.as_ref().is_some_and(|v| *v >= self.beta),
            LpStatus::Unbounded => true,
            LpStatus::Infeasible => false,
        };
        if !lp_ok || !integer_feasible(&p, cfg)?.is_feasible() {
            return Ok(false);
        }
        let good = p.with(LinearConstraint::ge(inst.c.clone(), &self.beta - &self.gamma));
        Ok(!integer_feasible(&good, cfg)?.is_feasible())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapResult {
    pub value: Rational,
    /// `None` when attainment is unknown.
    pub attained: Option<bool>,
    pub witnesses: Vec<GapWitness>,
    /// Every `(gamma, gap_exceeds(gamma))` evaluated, in order.
    pub trace: Vec<(Rational, bool)>,
}

impl GapResult {
    pub fn to_json(&self) -> Value {
        json!({
            "value": format_rational(&self.value),
            "attained": match self.attained { Some(true) => json!(true), Some(false) => json!(false), None => json!("unknown") },
            "certificate": self.witnesses.last().map(GapWitness::to_json),
        })
    }

    /// Tested values split into a true prefix and a false suffix.
    pub fn trace_is_monotone(&self) -> bool {
        let max_true = self.trace.iter().filter(|t| t.1).map(|t| &t.0).max();
        let min_false = self.trace.iter().filter(|t| !t.1).map(|t| &t.0).min();
        match (max_true, min_false) {
            (Some(t), Some(f)) => t < f,
            _ => true,
        }
    }
}

/// `{(beta, b) : max {c x : A x <= b} >= beta}` by eliminating `x`.
pub fn build_value_polyhedron(inst: &GapInstance) -> PartiallyOpenPolyhedron {
    let (m, n) = (inst.a.nrows(), inst.a.ncols());
    // variables (beta, b, x)
    let mut rows = Vec::with_capacity(m + 1);
    let mut r0 = vec![Rational::zero(); 1 + m + n];
    r0[0] = Rational::one();
    for (k, ck) in inst.c.iter().enumerate() {
        r0[1 + m + k] = -ck;
    }
    rows.push(LinearConstraint::le(r0, Rational::zero()));
    for i in 0..m {
        let mut r = vec![Rational::zero(); 1 + m + n];
        r[1 + i] = -Rational::one();
        r[1 + m..].clone_from_slice(inst.a.row(i));
        rows.push(LinearConstraint::le(r, Rational::zero()));
    }
    let sys = PartiallyOpenPolyhedron::new(1 + m + n, rows).expect("consistent rows");
    fm_eliminate_many(&sys, &(1 + m..1 + m + n).collect::<Vec<_>>(), true).0
}

/// The sentence "every `(beta, b)` in the value polyhedron with an integral
/// point in `P_b` has an integral `x` with `c x >= beta - gamma`".
fn gap_sentence(inst: &GapInstance, gamma: &Rational) -> ForAllExistsInstance {
    let (m, n) = (inst.a.nrows(), inst.a.ncols());
    let value = build_value_polyhedron(inst);
    // variables (s, b, y) with s = gamma - beta the right-hand side of -c x <= s
    let dim = 1 + m + n;
    let mut rows = Vec::new();
    for row in value.constraints() {
        // row over (beta, b): beta = gamma - s
        let mut a = vec![Rational::zero(); dim];
        a[0] = -&row.a[0];
        a[1..=m].clone_from_slice(&row.a[1..]);
        rows.push(LinearConstraint::new(a, &row.beta - &row.a[0] * gamma, row.strict));
    }
    for i in 0..m {
        // A y <= b
        let mut a = vec![Rational::zero(); dim];
        a[1 + i] = -Rational::one();
        a[1 + m..].clone_from_slice(inst.a.row(i));
        rows.push(LinearConstraint::le(a, Rational::zero()));
    }
    let q = PartiallyOpenPolyhedron::new(dim, rows).expect("consistent rows");
    let neg_c: Vec<Rational> = inst.c.iter().map(|x| -x).collect();
    let stacked = RatMatrix::from_rows(vec![neg_c], n).expect("row length").stack(&inst.a);
    ForAllExistsInstance { a: stacked, q, p: n }
}

/// Whether some integer-feasible `b` has `LP(b) - IP(b) > gamma`.
pub fn gap_exceeds(inst: &GapInstance, gamma: &Rational, cfg: &Config) -> Result<Option<GapWitness>> {
    if gamma.is_negative() {
        return Err(Error::Parse("gamma must be non-negative".into()));
    }
    if inst.c.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let sentence = gap_sentence(inst, gamma);
    let r = decide_forall_exists(&sentence, cfg)?;
    Ok(match (r.verdict, r.counterexample) {
        (Verdict::Fails, Some(cx)) => {
            Some(GapWitness { beta: gamma - &cx.b[0], b: cx.b[1..].to_vec(), gamma: gamma.clone() })
        }
        _ => None,
    })
}

/// Distinct absolute values of the non-zero square subdeterminants of `[A; c]`,
/// multiplied together.
pub fn default_denominator_bound(inst: &GapInstance) -> BigInt {
    let stacked = inst.a.stack(&RatMatrix::from_rows(vec![inst.c.clone()], inst.c.len()).expect("row length"));
    let scale = crate::numkernel::rational::denom_lcm(stacked.entries());
    let ints = RatMatrix::from_rows(
        stacked.rows_iter().map(|r| r.iter().map(|x| x * from_int(&scale)).collect()).collect(),
        stacked.ncols(),
    )
    .expect("row length");
    let mut seen: Vec<Rational> = Vec::new();
    for k in 1..=ints.ncols().min(ints.nrows()) {
        for rows in combinations(ints.nrows(), k) {
            for cols in combinations(ints.ncols(), k) {
                let d = ints.select_rows(&rows).select_cols(&cols).det().abs();
                if !d.is_zero() && !seen.contains(&d) {
                    seen.push(d);
                }
            }
        }
    }
    seen.iter().fold(BigInt::one(), |acc, d| acc * d.to_integer())
}

/// Binary search for the gap value with denominator at most `denom`.
pub fn max_gap(inst: &GapInstance, denom: Option<&BigInt>, cfg: &Config) -> Result<GapResult> {
    let d = denom.or(cfg.denom_bound.as_ref()).cloned().unwrap_or_else(|| default_denominator_bound(inst));
    if d < BigInt::one() {
        return Err(Error::Parse("denominator bound must be at least 1".into()));
    }
    if inst.c.iter().all(Zero::is_zero) {
        return Ok(GapResult { value: Rational::zero(), attained: Some(true), witnesses: Vec::new(), trace: Vec::new() });
    }
    let mut trace = Vec::new();
    let mut witnesses = Vec::new();
    let mut test = |g: &Rational, trace: &mut Vec<(Rational, bool)>| -> Result<bool> {
        let w = gap_exceeds(inst, g, cfg)?;
        trace.push((g.clone(), w.is_some()));
        if let Some(w) = w {
            witnesses.push(w);
        }
        Ok(trace.last().expect("just pushed").1)
    };
    let cap = cfg.gap_cap.clone();
    // hi with gap_exceeds(hi) false
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    while test(&hi, &mut trace)? {
        lo = hi.clone();
        hi *= Rational::from_integer(2.into());
        if hi > cap {
            return Err(Error::GapExceedsCap(format_rational(&cap)));
        }
    }
    let zero_exceeds = lo.is_positive() || test(&Rational::zero(), &mut trace)?;
    let value = if !zero_exceeds {
        Rational::zero()
    } else {
        let resolution = Rational::new(BigInt::one(), BigInt::from(2) * &d * &d);
        while &hi - &lo >= resolution {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            if test(&mid, &mut trace)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let v = rational_reconstruct(&hi, &d);
        let below = &v - Rational::new(BigInt::one(), d.clone());
        let ok_at = !test(&v, &mut trace)?;
        let ok_below = v.is_zero() || below.is_negative() || test(&below, &mut trace)?;
        if !ok_at || !ok_below {
            return Err(Error::DenominatorBoundTooSmall);
        }
        v
    };
    Ok(GapResult { value, attained: None, witnesses, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rational::{rat, ratio};

    fn interval(c: Rational) -> GapInstance {
        GapInstance::new(RatMatrix::from_i64(&[&[1], &[-1]]), vec![c]).unwrap()
    }

    #[test]
    fn value_polyhedron_of_interval() {
        let q = build_value_polyhedron(&interval(rat(1)));
        assert_eq!(q.dim(), 3);
        assert!(q.contains(&[rat(1), rat(1), rat(0)]));
        assert!(!q.contains(&[rat(2), rat(1), rat(0)]));
        assert!(!q.contains(&[rat(0), rat(1), rat(-2)]));
        let zero = build_value_polyhedron(&interval(rat(0)));
        assert!(zero.contains(&[rat(0), rat(1), rat(0)]));
        assert!(!zero.contains(&[rat(1), rat(1), rat(0)]));
    }

    #[test]
    fn interval_threshold() {
        let cfg = Config::default();
        let inst = interval(rat(1));
        let w = gap_exceeds(&inst, &ratio(1, 2), &cfg).unwrap().unwrap();
        assert!(w.verify(&inst, &cfg).unwrap());
        let mut forged = w.clone();
        forged.beta += rat(1);
        assert!(!forged.verify(&inst, &cfg).unwrap());
        assert!(gap_exceeds(&inst, &rat(1), &cfg).unwrap().is_none());
        assert!(gap_exceeds(&inst, &rat(0), &cfg).unwrap().is_some());
    }

    #[test]
    fn interval_values() {
        let cfg = Config::default();
        let r = max_gap(&interval(rat(1)), Some(&BigInt::from(4)), &cfg).unwrap();
        assert_eq!(r.value, rat(1));
        assert!(r.trace_is_monotone());
        let r = max_gap(&interval(rat(2)), Some(&BigInt::from(4)), &cfg).unwrap();
        assert_eq!(r.value, rat(2));
        assert_eq!(default_denominator_bound(&interval(rat(2))), BigInt::from(2));
    }

    #[test]
    fn box_value() {
        let cfg = Config::default();
        let a = RatMatrix::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let inst = GapInstance::new(a, vec![rat(1), rat(1)]).unwrap();
        let r = max_gap(&inst, Some(&BigInt::from(8)), &cfg).unwrap();
        assert_eq!(r.value, rat(2));
        assert!(r.trace_is_monotone());
    }
}
