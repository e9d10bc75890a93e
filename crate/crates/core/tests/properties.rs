mod common;

use common::{is_bounded_matrix, rats};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use pilp_core::config::Config;
use pilp_core::gap::{max_gap, GapInstance};
use pilp_core::lattice::{lattice_width, Width};
use pilp_core::milp::{mixed_integer_feasible, MipProblem};
use pilp_core::numkernel::rational::{ceil, floor, from_int, gcd_all, ratio, rational_reconstruct, Rational};
use pilp_core::numkernel::{hermite_normal_form, unimodular_for_direction};
use pilp_core::oracle::{brute_gap, fiber, Grid, IntBox};
use pilp_core::paramwidth::width_partition;
use pilp_core::polyhedron::{
    combinations, fm_eliminate, is_feasible, lp_optimize, rhs_feasibility_region, LinearConstraint, LpStatus,
    PartiallyOpenPolyhedron, Sense,
};
use pilp_core::RatMatrix;
use proptest::prelude::*;

fn matrix(m: usize, n: usize, k: i64) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(prop::collection::vec(-k..=k, n), m).prop_map(move |rows| {
        RatMatrix::from_rows(rows.into_iter().map(|r| rats(&r)).collect(), n).unwrap()
    })
}

fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=4).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| ratio(n, d)))
}

fn system(n: usize, m: usize) -> impl Strategy<Value = PartiallyOpenPolyhedron> {
    prop::collection::vec((prop::collection::vec(-5i64..=5, n), rational(-6, 6), prop::bool::weighted(0.3)), m)
        .prop_map(move |rows| {
            let rows = rows.into_iter().map(|(a, b, s)| LinearConstraint::new(rats(&a), b, s)).collect();
            PartiallyOpenPolyhedron::new(n, rows).unwrap()
        })
}

/// A bounded polytope `{A x <= A x0 + s}` with `s >= 0`.
fn polytope(n: usize, max_m: usize) -> impl Strategy<Value = PartiallyOpenPolyhedron> {
    (n + 1..=max_m)
        .prop_flat_map(move |m| {
            (
                matrix(m, n, 5).prop_filter("bounded", is_bounded_matrix),
                prop::collection::vec(rational(-2, 2), n),
                prop::collection::vec(rational(0, 3), m),
            )
        })
        .prop_map(|(a, x0, s)| {
            let b: Vec<Rational> = a.mul_vec(&x0).into_iter().zip(s).map(|(v, s)| v + s).collect();
            PartiallyOpenPolyhedron::from_matrix(&a, &b).unwrap()
        })
}

/// Maximum of `c x` over basic feasible solutions of a bounded closed system.
fn vertex_max(p: &PartiallyOpenPolyhedron, c: &[Rational]) -> Option<Rational> {
    let a = p.matrix();
    let b = p.rhs();
    let mut best: Option<Rational> = None;
    for rows in combinations(a.nrows(), a.ncols()) {
        let Some(x) = a.select_rows(&rows).solve(&rows.iter().map(|&i| b[i].clone()).collect::<Vec<_>>()) else {
            continue;
        };
        if p.closure().contains(&x) {
            let v: Rational = c.iter().zip(&x).map(|(c, x)| c * x).sum();
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hnf_is_triangular_dominant_and_unimodular(
        a in (1usize..=4).prop_flat_map(|m| (m..=4).prop_flat_map(move |n| matrix(m, n, 9)))
    ) {
        prop_assume!(a.rank() == a.nrows());
        let hnf = hermite_normal_form(&a).unwrap();
        prop_assert!(hnf.u.matrix().det().abs().is_one());
        let au = a.mul_int(hnf.u.matrix());
        let m = a.nrows();
        for i in 0..m {
            for j in 0..a.ncols() {
                let want = if j < m { from_int(&hnf.h[(i, j)]) } else { Rational::zero() };
                prop_assert_eq!(&au.row(i)[j], &want);
            }
            for j in 0..i {
                prop_assert!(hnf.h[(i, j)].is_zero());
            }
            for j in i + 1..m {
                prop_assert!(!hnf.h[(i, j)].is_negative() && hnf.h[(i, j)] < hnf.h[(i, i)]);
            }
        }
    }

    #[test]
    fn direction_transform_preserves_gcd(c in prop::collection::vec(-30i64..=30, 1..=4)) {
        let c: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        prop_assume!(c.iter().any(|x| !x.is_zero()));
        let (g, u) = unimodular_for_direction(&c).unwrap();
        let cu: Vec<BigInt> = (0..c.len()).map(|j| c.iter().zip(u.matrix().column(j)).map(|(a, b)| a * b).sum()).collect();
        prop_assert_eq!(gcd_all(&cu), gcd_all(&c));
        prop_assert_eq!(&cu[0], &g);
        prop_assert!(cu[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn reconstruction_recovers_nearby_fractions(p in -200i64..=200, q in 1i64..=40, d in 40i64..=60, eps in -99i64..=99) {
        let x = ratio(p, q);
        let dd = BigInt::from(d);
        prop_assert_eq!(rational_reconstruct(&x, &dd), x.clone());
        // anything closer than 1/(2 D^2) rounds back
        let nudged = &x + ratio(eps, 200 * d * d);
        prop_assert_eq!(rational_reconstruct(&nudged, &dd), x);
    }

    #[test]
    fn fm_projection_is_exact(p in (2usize..=4).prop_flat_map(|n| (2usize..=8).prop_flat_map(move |m| system(n, m))),
                              k in 0usize..4, y in prop::collection::vec(rational(-3, 3), 3)) {
        let n = p.dim();
        let k = k % n;
        let proj = fm_eliminate(&p, k);
        let y = &y[..n - 1];
        // the fiber over y is a 1-D system; decide it with the LP
        let mut fixed = p.clone();
        for (i, v) in (0..n).filter(|&i| i != k).zip(y) {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            fixed.push(LinearConstraint::le(e.clone(), v.clone()));
            fixed.push(LinearConstraint::ge(e, v.clone()));
        }
        prop_assert_eq!(proj.contains(y), is_feasible(&fixed).is_some());
    }

    #[test]
    fn feasibility_agrees_with_optimization(p in (1usize..=3).prop_flat_map(|n| (1usize..=6).prop_flat_map(move |m| system(n, m)))) {
        let c = vec![Rational::one(); p.dim()];
        let lp = lp_optimize(&p, &c, Sense::Max);
        prop_assert_eq!(is_feasible(&p).is_some(), lp.status != LpStatus::Infeasible);
        if let Some(x) = is_feasible(&p) {
            prop_assert!(p.contains(&x));
        }
    }

    #[test]
    fn lp_matches_vertex_enumeration(p in (1usize..=3).prop_flat_map(|n| polytope(n, 6)), c in prop::collection::vec(-4i64..=4, 3)) {
        let c = rats(&c[..p.dim()]);
        let lp = lp_optimize(&p, &c, Sense::Max);
        prop_assert_eq!(lp.status, LpStatus::Finite);
        prop_assert!(lp.attained);
        prop_assert_eq!(lp.value, vertex_max(&p, &c));
    }

    #[test]
    fn width_scales_and_directions_are_coprime(p in (1usize..=3).prop_flat_map(|n| polytope(n, 5)),
                                               v in prop::collection::vec(rational(-2, 2), 3),
                                               alpha in prop::sample::select(vec![(1i64, 3i64), (1, 2), (2, 1)])) {
        let w = lattice_width(&p).unwrap();
        if let Some(c) = &w.direction {
            prop_assert!(gcd_all(c).is_one());
        }
        let alpha = ratio(alpha.0, alpha.1);
        let moved = p.affine_image(&v[..p.dim()], &alpha).unwrap();
        let scaled = match w.width {
            Width::Finite(x) => Width::Finite(x * &alpha),
            Width::Infinite => Width::Infinite,
        };
        prop_assert_eq!(lattice_width(&moved).unwrap().width, scaled);
    }

    #[test]
    fn partition_regions_are_disjoint_and_exact(a in (1usize..=2).prop_flat_map(|n| (n + 1..=n + 2).prop_flat_map(move |m| matrix(m, n, 3))),
                                                x0 in prop::collection::vec(rational(-2, 2), 2),
                                                s in prop::collection::vec(rational(0, 3), 4)) {
        prop_assume!(a.rank() == a.ncols() && pilp_core::lattice::finite_width_test(&a).unwrap());
        let b: Vec<Rational> = a.mul_vec(&x0[..a.ncols()]).into_iter().zip(s).map(|(v, s)| v + s).collect();
        let part = width_partition(&a, &rhs_feasibility_region(&a)).unwrap();
        let hits: Vec<_> = part.regions.iter().filter(|r| r.region.contains(&b)).collect();
        prop_assert_eq!(hits.len(), 1);
        let got = lattice_width(&fiber(&a, &b)).unwrap().width;
        prop_assert_eq!(got, Width::Finite(hits[0].triple.width(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_witnesses_lift_and_agree_with_enumeration(p in (2usize..=3).prop_flat_map(|n| polytope(n, 6)), mask in 1u8..7) {
        let n = p.dim();
        let ints: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!ints.is_empty() && ints.len() < n);
        let r = mixed_integer_feasible(&MipProblem { p: p.clone(), int_indices: ints.clone() }, &Config::default()).unwrap();
        // enumerate the integral coordinates, leave the rest to the LP
        let range = |i: usize, sense| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            lp_optimize(&p, &e, sense).value.unwrap()
        };
        let lo: Vec<BigInt> = ints.iter().map(|&i| ceil(&range(i, Sense::Min))).collect();
        let hi: Vec<BigInt> = ints.iter().map(|&i| floor(&range(i, Sense::Max))).collect();
        let truth = lo.iter().zip(&hi).all(|(l, h)| l <= h)
            && IntBox::new(lo, hi).unwrap().points().any(|z| {
                let mut q = p.clone();
                // fixing drops the coordinate, so go from the back
                for (k, &i) in ints.iter().enumerate().rev() {
                    q = q.fix_variable(i, &from_int(&z[k]));
                }
                is_feasible(&q).is_some()
            });
        prop_assert_eq!(r.is_feasible(), truth);
        if let Some(x) = r.witness {
            prop_assert!(p.contains(&x));
            prop_assert!(ints.iter().all(|&i| x[i].is_integer()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn grid_gap_never_exceeds_the_gap(p in 1i64..=3, q in 1i64..=3, c in prop::sample::select(vec![(1i64, 1i64), (2, 1), (1, 2), (3, 2)])) {
        let a = RatMatrix::from_i64(&[&[p], &[-q]]);
        let c = ratio(c.0, c.1);
        let inst = GapInstance::new(a.clone(), vec![c.clone()]).unwrap();
        let g = max_gap(&inst, None, &Config::default()).unwrap();
        prop_assert!(g.trace_is_monotone());
        let step = ratio(1, 4);
        let grid = Grid::uniform(2, &Rational::zero(), &ratio(3, 1), &step).unwrap();
        let brute = brute_gap(&a, std::slice::from_ref(&c), &grid).unwrap();
        prop_assert!(brute <= g.value);
        prop_assert!(&g.value - &brute <= &c * &step);
    }
}
