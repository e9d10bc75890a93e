#![allow(dead_code)]

use num_bigint::BigInt;
use pilp_core::numkernel::rational::{ratio, Rational};
use pilp_core::decide::ForAllExistsInstance;
use pilp_core::oracle::{bounding_box, Grid, IntBox};
use pilp_core::polyhedron::{LinearConstraint, PartiallyOpenPolyhedron};
use pilp_core::RatMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(r: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Rational {
    let d = r.gen_range(1..=den);
    ratio(r.gen_range(lo * d..=hi * d), d)
}

pub fn int_matrix(r: &mut impl Rng, m: usize, n: usize, lo: i64, hi: i64) -> RatMatrix {
    let rows: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| ratio(r.gen_range(lo..=hi), 1)).collect()).collect();
    RatMatrix::from_rows(rows, n).unwrap()
}

/// `A` has full column rank and `{A r <= 0} = {0}`.
pub fn is_bounded_matrix(a: &RatMatrix) -> bool {
    if a.rank() < a.ncols() {
        return false;
    }
    let zero = vec![Rational::from_integer(0.into()); a.nrows()];
    let p = PartiallyOpenPolyhedron::from_matrix(a, &zero).unwrap();
    p.is_bounded()
}

/// A bounded matrix with `m` rows in `n` columns, entries in `[-k, k]`.
pub fn bounded_matrix(r: &mut impl Rng, m: usize, n: usize, k: i64) -> RatMatrix {
    loop {
        let a = int_matrix(r, m, n, -k, k);
        if is_bounded_matrix(&a) {
            return a;
        }
    }
}

/// A right-hand side with `P_b` non-empty: `b = A x0 + s`, `s >= 0`.
pub fn feasible_rhs(r: &mut impl Rng, a: &RatMatrix, den: i64) -> Vec<Rational> {
    let x0: Vec<Rational> = (0..a.ncols()).map(|_| small_rat(r, -2, 2, den)).collect();
    let ax = a.mul_vec(&x0);
    ax.into_iter().map(|v| v + small_rat(r, 0, 3, den)).collect()
}

/// A random bounded non-empty polytope in dimension `n`.
pub fn random_polytope(r: &mut impl Rng, n: usize, max_m: usize, k: i64) -> PartiallyOpenPolyhedron {
    loop {
        let m = r.gen_range(n + 1..=max_m.max(n + 1));
        let a = bounded_matrix(r, m, n, k);
        let b = feasible_rhs(r, &a, 4);
        let p = PartiallyOpenPolyhedron::from_matrix(&a, &b).unwrap();
        if bounding_box(&p).is_some() {
            return p;
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| ratio(x, 1)).collect()
}

pub struct Sample {
    pub inst: ForAllExistsInstance,
    pub grid: Grid,
    pub zbox: IntBox,
}

/// `b` in a box around a feasible right-hand side; with `p = 1` the first
/// coordinate also moves with an integral `y` in `[-1, 1]`.
pub fn random_sample(r: &mut impl Rng) -> Sample {
    let n = r.gen_range(1..=2);
    let m = r.gen_range(n + 1..=6.min(n + 3));
    let p = r.gen_range(0..=1usize);
    let a = bounded_matrix(r, m, n, 3);
    let b0 = feasible_rhs(r, &a, 2);
    let radii = [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(1, 1)];
    let step = ratio(r.gen_range(1..=2), 2);
    let dim = m + p;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for i in 0..m {
        let rad = radii[r.gen_range(0..radii.len())].clone();
        let mut e = vec![Rational::from_integer(0.into()); dim];
        e[i] = ratio(1, 1);
        if i == 0 && p == 1 {
            e[m] = -step.clone();
        }
        rows.push(LinearConstraint::le(e.clone(), &b0[i] + &rad));
        rows.push(LinearConstraint::ge(e, &b0[i] - &rad));
        let mut axis = Vec::new();
        let shifts: Vec<Rational> = if i == 0 && p == 1 { vec![-step.clone(), ratio(0, 1), step.clone()] } else { vec![ratio(0, 1)] };
        for s in &shifts {
            for k in [-2i64, -1, 0, 1, 2] {
                let v = &b0[i] + s + &rad * ratio(k, 2);
                if !axis.contains(&v) {
                    axis.push(v);
                }
            }
        }
        values.push(axis);
    }
    if p == 1 {
        let mut e = vec![Rational::from_integer(0.into()); dim];
        e[m] = ratio(1, 1);
        rows.push(LinearConstraint::le(e.clone(), ratio(1, 1)));
        rows.push(LinearConstraint::ge(e, ratio(-1, 1)));
    }
    let q = PartiallyOpenPolyhedron::new(dim, rows).unwrap();
    let zbox = IntBox::cube(p, -1, 1);
    Sample { inst: ForAllExistsInstance::new(a, q, p).unwrap(), grid: Grid { values }, zbox }
}
