//! Deciding `for all b in Q / Z^p there is an integral x with A x <= b`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::io::{int_vec_json, rat_vec_json};
use crate::lattice::recession_interior;
use crate::milp::{integer_feasible, mixed_integer_feasible, MipProblem};
use crate::numkernel::rational::{floor, from_int, is_integral, Rational};
use crate::numkernel::{normalize_full_column_rank, Normalized, RatMatrix};
use crate::polyhedron::{
    combinations, fm_eliminate_many, is_feasible, rhs_feasibility_region, simplify, LinearConstraint, PartiallyOpenPolyhedron,
};
use crate::structural::{structural_partition, CandidateScheme};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForAllExistsInstance {
    pub a: RatMatrix,
    /// Lives in `R^(m + p)`: right-hand side first, then the projected coordinates.
    pub q: PartiallyOpenPolyhedron,
    pub p: usize,
}

impl ForAllExistsInstance {
    pub fn new(a: RatMatrix, q: PartiallyOpenPolyhedron, p: usize) -> Result<Self> {
        if q.dim() != a.nrows() + p {
            return Err(Error::Dimension(format!("Q has arity {}, expected {} + {p}", q.dim(), a.nrows())));
        }
        Ok(ForAllExistsInstance { a, q, p })
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

/// `(b, z)` in `Q` with `z` integral and `A x <= b` integer-infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub b: Vec<Rational>,
    pub z: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionResult {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

impl DecisionResult {
    fn holds() -> Self {
        DecisionResult { verdict: Verdict::Holds, counterexample: None }
    }

    fn fails(b: Vec<Rational>, z: Vec<BigInt>) -> Self {
        DecisionResult { verdict: Verdict::Fails, counterexample: Some(Counterexample { b, z }) }
    }

    pub fn to_json(&self) -> Value {
        match &self.counterexample {
            None => json!({"verdict": "Holds"}),
            Some(c) => json!({"verdict": "Fails", "counterexample": {"b": rat_vec_json(&c.b), "z": int_vec_json(&c.z)}}),
        }
    }

    /// Re-checks a `Fails` certificate from scratch; `Holds` carries none.
    pub fn verify(&self, inst: &ForAllExistsInstance, cfg: &Config) -> Result<bool> {
        let Some(c) = &self.counterexample else {
            return Ok(self.verdict == Verdict::Holds);
        };
        if self.verdict != Verdict::Fails || c.b.len() != inst.m() || c.z.len() != inst.p {
            return Ok(false);
        }
        let mut bz = c.b.clone();
        bz.extend(c.z.iter().map(from_int));
        if !inst.q.contains(&bz) {
            return Ok(false);
        }
        let p = PartiallyOpenPolyhedron::from_matrix(&inst.a, &c.b)?;
        Ok(!integer_feasible(&p, cfg)?.is_feasible())
    }
}

fn split_witness(x: &[Rational], m: usize, p: usize) -> (Vec<Rational>, Vec<BigInt>) {
    debug_assert!(x[m..m + p].iter().all(is_integral));
    (x[..m].to_vec(), x[m..m + p].iter().map(floor).collect())
}

/// Decides the sentence through a structural partition of the feasible
/// right-hand sides.
pub fn decide_forall_exists(inst: &ForAllExistsInstance, cfg: &Config) -> Result<DecisionResult> {
    let (m, p) = (inst.m(), inst.p);
    if inst.q.dim() != m + p {
        return Err(Error::Dimension(format!("Q has arity {}, expected {}", inst.q.dim(), m + p)));
    }
    if is_feasible(&inst.q).is_none() {
        return Ok(DecisionResult::holds());
    }
    let reduced = match normalize_full_column_rank(&inst.a) {
        Normalized::Reduced { reduced, .. } => reduced,
        Normalized::NoVariables { .. } => RatMatrix::zeros(m, 0),
    };
    let ints: Vec<usize> = (m..m + p).collect();

    // b in Q / Z^p whose fiber is empty even over the reals
    let region = rhs_feasibility_region(&reduced);
    for row in region.constraints() {
        let mut a = row.a.clone();
        a.resize(m + p, Rational::zero());
        let violated = LinearConstraint::new(a, row.beta.clone(), row.strict).negated();
        let mip = MipProblem { p: inst.q.with(violated), int_indices: ints.clone() };
        if let Some(x) = mixed_integer_feasible(&mip, cfg)?.witness {
            let (b, z) = split_witness(&x, m, p);
            return Ok(DecisionResult::fails(b, z));
        }
    }
    if reduced.ncols() == 0 || recession_interior(&reduced) {
        // every non-empty fiber has integral points
        return Ok(DecisionResult::holds());
    }
    let sp = structural_partition(&reduced, &region, cfg)?;
    for scheme in &sp.schemes {
        if let Some((b, z)) = scheme_counterexample(&reduced, inst, scheme, cfg)? {
            return Ok(DecisionResult::fails(b, z));
        }
    }
    Ok(DecisionResult::holds())
}

/// Affine form over the MIP variables.
type Form = (Vec<Rational>, Rational);

/// Searches `(b, y, z)` inside one scheme with every candidate outside `P_b`.
fn scheme_counterexample(
    a: &RatMatrix,
    inst: &ForAllExistsInstance,
    scheme: &CandidateScheme,
    cfg: &Config,
) -> Result<Option<(Vec<Rational>, Vec<BigInt>)>> {
    let (m, p, l) = (inst.m(), inst.p, scheme.l);
    let base_dim = m + p + l;
    // each non-integral candidate component gets an integral rounding variable
    let mut rounded: Vec<Form> = Vec::new();
    let mut comps: Vec<Vec<Comp>> = Vec::new();
    for cand in &scheme.candidates {
        let mut cs = Vec::new();
        for r in 0..cand.t.outputs() {
            let coef = cand.t.matrix.row(r);
            let integral =
                coef[..m].iter().all(Zero::is_zero) && coef[m..].iter().all(is_integral) && is_integral(&cand.t.offset[r]);
            let mut f = vec![Rational::zero(); base_dim];
            f[..m].clone_from_slice(&coef[..m]);
            f[m + p..].clone_from_slice(&coef[m..]);
            let form = (f, cand.t.offset[r].clone());
            if integral {
                cs.push(Comp::Exact(form));
            } else {
                cs.push(Comp::Var(rounded.len()));
                rounded.push(form);
            }
        }
        comps.push(cs);
    }
    let dim = base_dim + rounded.len();
    let widen = |form: &Form| -> Form {
        let mut f = form.0.clone();
        f.resize(dim, Rational::zero());
        (f, form.1.clone())
    };
    // x_j = U_j w_j as forms over all variables
    let points: Vec<Vec<Form>> = scheme
        .candidates
        .iter()
        .zip(&comps)
        .map(|(cand, cs)| {
            let u = cand.u.matrix();
            (0..u.nrows())
                .map(|i| {
                    let mut f = vec![Rational::zero(); dim];
                    let mut c0 = Rational::zero();
                    for (j, comp) in cs.iter().enumerate() {
                        let uij = from_int(&u[(i, j)]);
                        if uij.is_zero() {
                            continue;
                        }
                        match comp {
                            Comp::Exact((g, g0)) => {
                                for (fk, gk) in f.iter_mut().zip(g) {
                                    *fk += &uij * gk;
                                }
                                c0 += &uij * g0;
                            }
                            Comp::Var(v) => f[base_dim + v] += &uij,
                        }
                    }
                    (f, c0)
                })
                .collect()
        })
        .collect();

    let mut rows: Vec<LinearConstraint> = Vec::new();
    rows.extend(inst.q.extend_dim(l + rounded.len()).constraints().iter().cloned());
    let s_pos: Vec<usize> = (0..m).chain(m + p..m + p + l).collect();
    rows.extend(scheme.sprime.embed(dim, &s_pos).constraints().iter().cloned());
    for (v, t) in rounded.iter().enumerate() {
        // t <= w < t + 1
        let (tf, t0) = widen(t);
        let mut lo = tf.clone();
        lo[base_dim + v] -= Rational::one();
        rows.push(LinearConstraint::le(lo, -t0.clone()));
        let mut hi: Vec<Rational> = tf.iter().map(|x| -x).collect();
        hi[base_dim + v] += Rational::one();
        rows.push(LinearConstraint::lt(hi, Rational::one() + t0));
    }
    let root = simplify(dim, rows);
    let ints: Vec<usize> = (m..dim).collect();

    // a_i x_j > b_i for each row index i
    let violation = |j: usize, i: usize| -> LinearConstraint {
        let mut f = vec![Rational::zero(); dim];
        let mut c0 = Rational::zero();
        for (k, comp) in points[j].iter().enumerate() {
            let aik = &a[(i, k)];
            for (fx, gx) in f.iter_mut().zip(&comp.0) {
                *fx += aik * gx;
            }
            c0 += aik * &comp.1;
        }
        f[i] -= Rational::one();
        // f . v + c0 > 0
        LinearConstraint::gt(f, -c0)
    };

    let mut found = None;
    dfs(&root, 0, points.len(), m, &violation, &mut |sys| {
        let r = mixed_integer_feasible(&MipProblem { p: sys.clone(), int_indices: ints.clone() }, cfg)?;
        if let Some(x) = r.witness {
            found = Some(split_witness(&x, m, p));
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

#[derive(Clone, Debug)]
enum Comp {
    Exact(Form),
    Var(usize),
}

/// Lexicographic walk over violated-row tuples with LP pruning; `leaf`
/// returns `true` to stop.
fn dfs(
    sys: &PartiallyOpenPolyhedron,
    j: usize,
    k: usize,
    m: usize,
    violation: &dyn Fn(usize, usize) -> LinearConstraint,
    leaf: &mut dyn FnMut(&PartiallyOpenPolyhedron) -> Result<bool>,
) -> Result<bool> {
    if sys.is_trivially_empty() || is_feasible(sys).is_none() {
        return Ok(false);
    }
    if j == k {
        return leaf(sys);
    }
    for i in 0..m {
        let next = sys.with(violation(j, i));
        if dfs(&next, j + 1, k, m, violation, leaf)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Same verdict by deciding every subsystem of `min(m, 2^n)` rows.
pub fn bell_scarf_decide(inst: &ForAllExistsInstance, cfg: &Config) -> Result<DecisionResult> {
    let (m, p, n) = (inst.m(), inst.p, inst.a.ncols());
    if m == 0 {
        return Err(Error::Dimension("at least one row is required".into()));
    }
    let size = if n >= usize::BITS as usize - 1 { m } else { m.min(1usize << n) };
    if size == m {
        return decide_forall_exists(inst, cfg);
    }
    for rows in combinations(m, size) {
        let others: Vec<usize> = (0..m).filter(|i| !rows.contains(i)).collect();
        let (q_sub, trace) = fm_eliminate_many(&inst.q, &others, true);
        let sub = ForAllExistsInstance { a: inst.a.select_rows(&rows), q: q_sub, p };
        let r = decide_forall_exists(&sub, cfg)?;
        if let Some(c) = r.counterexample {
            let mut point = c.b.clone();
            point.extend(c.z.iter().map(from_int));
            let full = trace.lift(&point).expect("projected points lift");
            let (b, z) = split_witness(&full, m, p);
            return Ok(DecisionResult::fails(b, z));
        }
    }
    Ok(DecisionResult::holds())
}
