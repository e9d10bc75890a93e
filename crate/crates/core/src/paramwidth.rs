//! Width-direction triples of a parametric polyhedron `{x : A x <= b}` and the
//! induced partition of right-hand-side space.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{int_vec_json, polyhedron_json, rat_matrix_json};
use crate::lattice::{cone_lattice_hull_vertices, finite_width_test, pair_cone_normals};
use crate::numkernel::rational::{dot, from_int, vector_size, Rational};
use crate::numkernel::RatMatrix;
use crate::polyhedron::{enumerate_bases, is_feasible, simplify, LinearConstraint, PartiallyOpenPolyhedron};

/// `F_N`: the `n x m` matrix with `F_N b = A_N^-1 b_N`.
pub fn basic_solution_map(a: &RatMatrix, basis: &[usize]) -> RatMatrix {
    let inv = a.select_rows(basis).inverse().expect("basis is non-singular");
    let mut f = RatMatrix::zeros(a.ncols(), a.nrows());
    for (k, &row) in basis.iter().enumerate() {
        for i in 0..a.ncols() {
            f[(i, row)] = inv[(i, k)].clone();
        }
    }
    f
}

/// `c G b <= min c x` and `max c x <= c F b` whenever `P_b` is non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthTriple {
    pub f: RatMatrix,
    pub g: RatMatrix,
    pub c: Vec<BigInt>,
    /// The bases behind `f` and `g`.
    pub bases: (Vec<usize>, Vec<usize>),
}

impl WidthTriple {
    fn c_rat(&self) -> Vec<Rational> {
        self.c.iter().map(from_int).collect()
    }

    /// Row vector `c F`.
    pub fn upper_form(&self) -> Vec<Rational> {
        self.f.vec_mul(&self.c_rat())
    }

    /// Row vector `c G`.
    pub fn lower_form(&self) -> Vec<Rational> {
        self.g.vec_mul(&self.c_rat())
    }

    /// Row vector `c (F - G)`.
    pub fn width_form(&self) -> Vec<Rational> {
        self.upper_form().iter().zip(self.lower_form()).map(|(u, l)| u - l).collect()
    }

    pub fn upper(&self, b: &[Rational]) -> Rational {
        dot(&self.upper_form(), b)
    }

    pub fn lower(&self, b: &[Rational]) -> Rational {
        dot(&self.lower_form(), b)
    }

    pub fn width(&self, b: &[Rational]) -> Rational {
        dot(&self.width_form(), b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "F": rat_matrix_json(&self.f),
            "G": rat_matrix_json(&self.g),
            "c": int_vec_json(&self.c),
            "bases": [self.bases.0, self.bases.1],
        })
    }
}

/// Direction candidates for the basis pair: integer-hull vertices of
/// `cone(A_N1) ∩ -cone(A_N2)` without the origin.
pub fn basis_pair_directions(a: &RatMatrix, n1: &[usize], n2: &[usize]) -> Vec<Vec<BigInt>> {
    if n1 == n2 {
        return Vec::new();
    }
    cone_lattice_hull_vertices(&pair_cone_normals(a, n1, n2), a.ncols())
}

/// All width triples of `A`, in lexicographic basis-pair order.
pub fn flat_direction_triples(a: &RatMatrix) -> Result<Vec<WidthTriple>> {
    if !finite_width_test(a)? {
        return Err(Error::InfiniteLatticeWidth);
    }
    let bases = enumerate_bases(a)?;
    let maps: Vec<RatMatrix> = bases.iter().map(|n| basic_solution_map(a, n)).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            for c in basis_pair_directions(a, &bases[i], &bases[j]) {
                if seen.insert((c.clone(), i, j)) {
                    out.push(WidthTriple {
                        f: maps[i].clone(),
                        g: maps[j].clone(),
                        c,
                        bases: (bases[i].clone(), bases[j].clone()),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `2 m^(2n) (2n+1)^n (24 n^5 phi)^(n-1)` with `phi` the largest column size.
pub fn triple_count_bound(a: &RatMatrix) -> BigInt {
    let (m, n) = (a.nrows() as u32, a.ncols() as u32);
    let phi = (0..a.ncols()).map(|j| vector_size(&a.column(j))).max().unwrap_or(1);
    let mut t = BigInt::from(2) * BigInt::from(m).pow(2 * n) * BigInt::from(2 * n + 1).pow(n);
    if n >= 1 {
        t *= (BigInt::from(24) * BigInt::from(n).pow(5) * BigInt::from(phi)).pow(n - 1);
    }
    t
}

#[derive(Clone, Debug)]
pub struct WidthRegion {
    pub region: PartiallyOpenPolyhedron,
    pub triple: WidthTriple,
}

#[derive(Clone, Debug)]
pub struct WidthPartition {
    pub regions: Vec<WidthRegion>,
}

impl WidthPartition {
    /// Index of the region containing `b`.
    pub fn locate(&self, b: &[Rational]) -> Option<usize> {
        self.regions.iter().position(|r| r.region.contains(b))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.regions
                .iter()
                .map(|r| json!({"region": polyhedron_json(&r.region), "triple": r.triple.to_json()}))
                .collect(),
        )
    }
}

/// Splits `Q` so that inside region `i` the width is `c_i (F_i - G_i) b`:
/// strictly smaller than every earlier triple, no larger than every later one.
/// Empty regions are dropped.
pub fn width_partition(a: &RatMatrix, q: &PartiallyOpenPolyhedron) -> Result<WidthPartition> {
    if q.dim() != a.nrows() {
        return Err(Error::Dimension(format!("Q has arity {}, expected {}", q.dim(), a.nrows())));
    }
    let triples = flat_direction_triples(a)?;
    let forms: Vec<Vec<Rational>> = triples.iter().map(WidthTriple::width_form).collect();
    let mut regions = Vec::new();
    for (i, t) in triples.iter().enumerate() {
        if forms[..i].contains(&forms[i]) {
            continue;
        }
        let mut rows: Vec<LinearConstraint> = q.constraints().to_vec();
        for (j, fj) in forms.iter().enumerate() {
            if j == i {
                continue;
            }
            let d: Vec<Rational> = forms[i].iter().zip(fj).map(|(x, y)| x - y).collect();
            rows.push(LinearConstraint::new(d, Rational::zero(), j < i));
        }
        let region = simplify(a.nrows(), rows);
        if region.is_trivially_empty() || is_feasible(&region).is_none() {
            continue;
        }
        regions.push(WidthRegion { region, triple: t.clone() });
    }
    Ok(WidthPartition { regions })
}

/// Smallest width among the triples at `b`, with the first triple attaining it.
pub fn evaluate_triples<'a>(triples: &'a [WidthTriple], b: &[Rational]) -> Option<(Rational, &'a WidthTriple)> {
    let mut best: Option<(Rational, &WidthTriple)> = None;
    for t in triples {
        let w = t.width(b);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, t));
        }
    }
    best
}
