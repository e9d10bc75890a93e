//! Hermite normal form and the unimodular transforms built from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix, UnimodularMatrix};
use super::rational::{denom_lcm, gcd_ext};
use crate::error::{Error, Result};

/// Result of [`hermite_normal_form`]: `A * U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: UnimodularMatrix,
}

/// Zeroes `w[row, other]` for every `other` in `cols` using column `pivot`,
/// leaving `gcd` of those entries at `w[row, pivot]`.
fn gcd_sweep(w: &mut IntMatrix, u: &mut IntMatrix, row: usize, pivot: usize, cols: &[usize]) {
    for &j in cols {
        if j == pivot || w[(row, j)].is_zero() {
            continue;
        }
        let a = w[(row, pivot)].clone();
        let b = w[(row, j)].clone();
        let (g, s, t) = gcd_ext(&a, &b);
        // [col_p, col_j] <- [col_p, col_j] * [[s, -b/g], [t, a/g]]
        let (p, q, r, v) = (s, -(&b / &g), t, &a / &g);
        w.combine_cols(pivot, j, &p, &q, &r, &v);
        u.combine_cols(pivot, j, &p, &q, &r, &v);
    }
}

/// Column-style Hermite normal form of an integral matrix with full row rank.
///
/// Rows are processed from the bottom up, so `H` comes out upper triangular
/// with `0 <= h[i][j] < h[i][i]` for `j > i`.
pub fn hermite_normal_form(a: &RatMatrix) -> Result<Hnf> {
    let w = a.to_int()?;
    hermite_normal_form_int(&w)
}

pub fn hermite_normal_form_int(a: &IntMatrix) -> Result<Hnf> {
    let (m, n) = (a.nrows(), a.ncols());
    if m > n {
        return Err(Error::NotFullRowRank);
    }
    let mut w = a.clone();
    let mut u = IntMatrix::identity(n);
    // pivot of row i lives in column i; columns m.. end up zero
    for i in (0..m).rev() {
        let free: Vec<usize> = (0..=i).chain(m..n).collect();
        gcd_sweep(&mut w, &mut u, i, i, &free);
        if w[(i, i)].is_zero() {
            return Err(Error::NotFullRowRank);
        }
        if w[(i, i)].is_negative() {
            w.negate_col(i);
            u.negate_col(i);
        }
        let d = w[(i, i)].clone();
        for j in i + 1..m {
            let q = w[(i, j)].div_floor(&d);
            w.sub_col_multiple(j, i, &q);
            u.sub_col_multiple(j, i, &q);
        }
    }
    let h = w.select_cols(&(0..m).collect::<Vec<_>>());
    Ok(Hnf { h, u: UnimodularMatrix::trusted(u) })
}

/// Returns `(g, U)` with `c * U = g * e1` and `g = gcd(c) > 0`.
pub fn unimodular_for_direction(c: &[BigInt]) -> Result<(BigInt, UnimodularMatrix)> {
    if c.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let row = IntMatrix::from_rows(vec![c.to_vec()], c.len());
    let hnf = hermite_normal_form_int(&row)?;
    Ok((hnf.h[(0, 0)].clone(), hnf.u))
}

/// Outcome of [`normalize_full_column_rank`].
#[derive(Clone, Debug)]
pub enum Normalized {
    /// `A * U = [reduced | 0]` with `reduced` of full column rank.
    Reduced { reduced: RatMatrix, u: UnimodularMatrix, dropped: usize },
    /// `A` is zero: the system has no variables left, only constant rows.
    NoVariables { u: UnimodularMatrix, dropped: usize },
}

impl Normalized {
    pub fn dropped(&self) -> usize {
        match self {
            Normalized::Reduced { dropped, .. } | Normalized::NoVariables { dropped, .. } => *dropped,
        }
    }

    pub fn transform(&self) -> &UnimodularMatrix {
        match self {
            Normalized::Reduced { u, .. } | Normalized::NoVariables { u, .. } => u,
        }
    }
}

/// Unimodular column echelon form: `A * U = [A' | 0]` with `A'` of full
/// column rank.
pub fn normalize_full_column_rank(a: &RatMatrix) -> Normalized {
    let (m, n) = (a.nrows(), a.ncols());
    if n > 0 && a.rank() == n {
        return Normalized::Reduced { reduced: a.clone(), u: UnimodularMatrix::identity(n), dropped: 0 };
    }
    let mut l = BigInt::one();
    for r in a.rows_iter() {
        l = l.lcm(&denom_lcm(r));
    }
    let scaled = RatMatrix::from_rows(
        a.rows_iter().map(|r| r.iter().map(|x| x * super::rational::from_int(&l)).collect()).collect(),
        n,
    )
    .expect("rows share a length");
    let mut w = scaled.to_int().expect("scaled matrix is integral");
    let mut u = IntMatrix::identity(n);
    let mut rank = 0;
    for i in 0..m {
        if rank == n {
            break;
        }
        let cols: Vec<usize> = (rank..n).collect();
        if cols.iter().all(|&j| w[(i, j)].is_zero()) {
            continue;
        }
        if let Some(&nz) = cols.iter().find(|&&j| !w[(i, j)].is_zero()) {
            w.swap_cols(rank, nz);
            u.swap_cols(rank, nz);
        }
        gcd_sweep(&mut w, &mut u, i, rank, &cols);
        rank += 1;
    }
    let u = UnimodularMatrix::trusted(u);
    if rank == 0 {
        return Normalized::NoVariables { u, dropped: n };
    }
    let full = a.mul_int(u.matrix());
    let reduced = full.select_cols(&(0..rank).collect::<Vec<_>>());
    Normalized::Reduced { reduced, u, dropped: n - rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_hnf(a: &IntMatrix, hnf: &Hnf) {
        let m = a.nrows();
        let au = a.mul(hnf.u.matrix());
        for i in 0..m {
            for j in 0..a.ncols() {
                let expect = if j < m { hnf.h[(i, j)].clone() } else { BigInt::zero() };
                assert_eq!(au[(i, j)], expect);
            }
            assert!(hnf.h[(i, i)].is_positive());
            for j in 0..i {
                assert!(hnf.h[(i, j)].is_zero());
            }
            for j in i + 1..m {
                assert!(!hnf.h[(i, j)].is_negative() && hnf.h[(i, j)] < hnf.h[(i, i)]);
            }
        }
        assert_eq!(hnf.u.matrix().det().abs(), BigInt::one());
    }

    #[test]
    fn hnf_examples() {
        let a = IntMatrix::from_i64(&[&[4, 6]]);
        let h = hermite_normal_form_int(&a).unwrap();
        assert_eq!(h.h, IntMatrix::from_i64(&[&[2]]));
        check_hnf(&a, &h);

        let id = IntMatrix::identity(3);
        let h = hermite_normal_form_int(&id).unwrap();
        assert_eq!(h.h, id);
        assert_eq!(h.u.matrix(), &id);

        let a = IntMatrix::from_i64(&[&[2, 1]]);
        let h = hermite_normal_form_int(&a).unwrap();
        assert_eq!(h.h, IntMatrix::from_i64(&[&[1]]));
        check_hnf(&a, &h);

        let a = IntMatrix::from_i64(&[&[3, 5, -7], &[2, 0, 4]]);
        check_hnf(&a, &hermite_normal_form_int(&a).unwrap());

        let bad = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(hermite_normal_form_int(&bad).unwrap_err(), Error::NotFullRowRank);
    }

    #[test]
    fn direction_examples() {
        let bi = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let (g, u) = unimodular_for_direction(&bi(&[1, 0, 0])).unwrap();
        assert_eq!(g, BigInt::one());
        assert_eq!(u.matrix(), &IntMatrix::identity(3));
        for c in [vec![4, 6], vec![0, 0, 3], vec![-6, 10, 15]] {
            let c = bi(&c);
            let (g, u) = unimodular_for_direction(&c).unwrap();
            let row = IntMatrix::from_rows(vec![c.clone()], c.len()).mul(u.matrix());
            assert_eq!(row.row(0)[0], g);
            assert!(row.row(0)[1..].iter().all(Zero::is_zero));
        }
        assert_eq!(unimodular_for_direction(&bi(&[4, 6])).unwrap().0, BigInt::from(2));
        assert_eq!(unimodular_for_direction(&bi(&[0, 0, 3])).unwrap().0, BigInt::from(3));
        assert_eq!(unimodular_for_direction(&bi(&[0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn normalize_examples() {
        let a = RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        match normalize_full_column_rank(&a) {
            Normalized::Reduced { reduced, dropped, .. } => {
                assert_eq!(dropped, 0);
                assert_eq!(reduced.rank(), 2);
            }
            _ => panic!(),
        }
        let a = RatMatrix::from_i64(&[&[1, 1], &[-1, -1]]);
        let n = normalize_full_column_rank(&a);
        assert_eq!(n.dropped(), 1);
        let Normalized::Reduced { reduced, u, .. } = n else { panic!() };
        assert_eq!(reduced.ncols(), 1);
        let au = a.mul_int(u.matrix());
        assert!(au.column(1).iter().all(Zero::is_zero));
        let z = RatMatrix::zeros(2, 3);
        assert!(matches!(normalize_full_column_rank(&z), Normalized::NoVariables { dropped: 3, .. }));
    }
}
