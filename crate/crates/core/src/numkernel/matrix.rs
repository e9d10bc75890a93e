//! Dense rational and integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{dot, from_int, Rational};
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length. An empty
    /// row list needs the column count from `cols`.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(RatMatrix { rows: r, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| Rational::from_integer(v.into()))
            })
            .collect();
        RatMatrix { rows: rows.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        RatMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        self.mul(&other.to_rat())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        self.rows_iter().map(|r| dot(r, v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Converts an integral matrix; fails if any entry is fractional.
    pub fn to_int(&self) -> Result<IntMatrix> {
        if !self.is_integral() {
            return Err(Error::Dimension("matrix is not integral".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.numer().clone()).collect(),
        })
    }

    /// Multiplies each row by the lcm of its denominators.
    pub fn scaled_integral_rows(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for r in self.rows_iter() {
            let l = super::rational::denom_lcm(r);
            data.extend(r.iter().map(|x| x.numer() * (&l / x.denom())));
        }
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.clone()).1.len()
    }

    /// Exact determinant by fraction-free elimination on row-scaled integers.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut scale = BigInt::one();
        for r in self.rows_iter() {
            scale *= super::rational::denom_lcm(r);
        }
        let d = self.scaled_integral_rows().det();
        Rational::new(d, scale)
    }

    /// Exact inverse, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[(r, col)].is_zero())?;
            aug.swap_rows(piv, col);
            let inv = aug[(col, col)].recip();
            for j in 0..2 * n {
                if !aug[(col, j)].is_zero() {
                    let v = &aug[(col, j)] * &inv;
                    aug[(col, j)] = v;
                }
            }
            for r in 0..n {
                if r != col && !aug[(r, col)].is_zero() {
                    let f = aug[(r, col)].clone();
                    for j in 0..2 * n {
                        if !aug[(col, j)].is_zero() {
                            let v = &aug[(col, j)] * &f;
                            aug[(r, j)] -= v;
                        }
                    }
                }
            }
        }
        Some(aug.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Solves `self * x = rhs` for square non-singular `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Self::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = rhs[i].clone();
        }
        let (ech, pivots) = row_echelon(aug);
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut s = ech[(i, n)].clone();
            for j in i + 1..n {
                s -= &ech[(i, j)] * &x[j];
            }
            x[i] = s / &ech[(i, i)];
        }
        Some(x)
    }

    /// Basis of the right null space `{x : self x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let (ech, pivots) = row_echelon(self.clone());
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut x = vec![Rational::zero(); self.cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate().rev() {
                let mut s = Rational::zero();
                for j in p + 1..self.cols {
                    if !ech[(r, j)].is_zero() && !x[j].is_zero() {
                        s -= &ech[(r, j)] * &x[j];
                    }
                }
                x[p] = s / &ech[(r, p)];
            }
            basis.push(x);
        }
        basis
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn stack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }
}

/// Gaussian elimination to row echelon form; returns the pivot columns.
fn row_echelon(mut m: RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        m.swap_rows(p, r);
        for i in r + 1..m.rows {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = &m[(i, c)] / &m[(r, c)];
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows_iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(super::rational::format_rational).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| BigInt::from(v))).collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<BigInt> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * cols, "ragged rows");
        IntMatrix { rows: r, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(from_int).collect() }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.to_rat().mul_vec(v)
    }

    /// Swaps columns `a` and `b`.
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Applies the 2x2 column transform `[col_a, col_b] <- [col_a, col_b] * [[p, q], [r, s]]`.
    pub fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = p * &x + r * &y;
            self[(i, b)] = q * &x + s * &y;
        }
    }

    /// `col_target -= factor * col_source`
    pub fn sub_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = factor * &self[(i, source)];
            self[(i, target)] -= v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Bareiss fraction-free determinant.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Square integer matrix with determinant +1 or -1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UnimodularMatrix(IntMatrix);

impl UnimodularMatrix {
    /// Checks `|det| = 1` exactly.
    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.det().abs() != BigInt::one() {
            return Err(Error::Dimension("matrix is not unimodular".into()));
        }
        Ok(UnimodularMatrix(m))
    }

    /// Wraps a matrix produced by a sequence of unimodular operations.
    pub(crate) fn trusted(m: IntMatrix) -> Self {
        debug_assert_eq!(m.det().abs(), BigInt::one());
        UnimodularMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_inner(self) -> IntMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix(self.0.mul(&other.0))
    }

    /// Integral inverse.
    pub fn inverse(&self) -> UnimodularMatrix {
        let inv = self.0.to_rat().inverse().expect("unimodular matrices are invertible");
        UnimodularMatrix(inv.to_int().expect("inverse of a unimodular matrix is integral"))
    }
}
