//! Dense exact matrices over the rationals or over `Q(n)`.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Exact scalar field for [`Matrix`].
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `rhs` must be nonzero.
    fn div(&self, rhs: &Self) -> Self;
    fn from_u64(x: u64) -> Self;

    fn invert_matrix(m: &Matrix<Self>) -> Result<Matrix<Self>> {
        gauss_jordan_inverse(m)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn from_u64(x: u64) -> Self {
        BigRational::from_integer(x.into())
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        (self / rhs).expect("nonzero divisor")
    }
    fn from_u64(x: u64) -> Self {
        RatFunc::constant(BigRational::from_integer(x.into()))
    }

    fn invert_matrix(m: &Matrix<Self>) -> Result<Matrix<Self>> {
        bareiss_inverse(m)
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, size, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Field>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, l| {
                let a = self.get(i, l);
                if a.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(rhs.get(l, j)))
                }
            })
        }))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = T::one().div(m.get(r, c));
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Exact inverse; Bareiss elimination over `Q[n]` for rational-function
/// matrices, Gauss–Jordan over `Q` otherwise.
pub fn mat_inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "inverse of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    T::invert_matrix(m)
}

fn gauss_jordan_inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (reduced, pivots) = aug.rref();
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular { rank: m.rank() });
    }
    Ok(Matrix::from_fn(n, n, |i, j| reduced.get(i, n + j).clone()))
}

/// Fraction-free Gauss–Jordan over `Q[n]`.
///
/// Rows are first cleared of denominators (`M = D^-1 P`), then `[P | I]` is
/// reduced with exact polynomial divisions by the previous pivot until the
/// left block is `d * I`; the right block is then `d * P^-1`.
fn bareiss_inverse(m: &Matrix<RatFunc>) -> Result<Matrix<RatFunc>> {
    let n = m.rows;
    if n == 0 {
        return Ok(m.clone());
    }
    let row_scale: Vec<Poly> = (0..n)
        .map(|i| m.row(i).iter().fold(Poly::one(), |acc, x| acc.lcm(x.den())))
        .collect();
    let mut a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            let mut row: Vec<Poly> = m
                .row(i)
                .iter()
                .map(|x| &row_scale[i].exact_div(x.den()).expect("lcm") * x.num())
                .collect();
            row.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            row
        })
        .collect();

    let mut prev = Poly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Err(Error::Singular { rank: m.rank() });
        };
        a.swap(k, p);
        let pivot_row = a[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = &(&pivot * &row[j]) - &(&factor * &pivot_row[j]);
                row[j] = v.exact_div(&prev)?;
            }
            row[k] = Poly::zero();
        }
        prev = pivot;
    }
    // every diagonal entry now equals the last pivot
    let det = prev;
    let mut out = Vec::with_capacity(n * n);
    for row in &a {
        for j in 0..n {
            out.push(RatFunc::new(&row[n + j] * &row_scale[j], det.clone())?);
        }
    }
    Matrix::new(n, n, out)
}

/// Moore–Penrose pseudo-inverse of a symmetric rational matrix via the
/// rank factorization `M = B C`: `M+ = C^T (C C^T)^-1 (B^T B)^-1 B^T`.
pub fn mat_pseudo_inverse(m: &Matrix<BigRational>) -> Result<Matrix<BigRational>> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (reduced, pivots) = m.rref();
    let r = pivots.len();
    if r == 0 {
        return Ok(Matrix::zeros(m.cols, m.rows));
    }
    let c = Matrix::from_fn(r, m.cols, |i, j| reduced.get(i, j).clone());
    let b = Matrix::from_fn(m.rows, r, |i, j| m.get(i, pivots[j]).clone());
    let ct = c.transpose();
    let bt = b.transpose();
    let cct_inv = mat_inverse(&c.mul(&ct)?)?;
    let btb_inv = mat_inverse(&bt.mul(&b)?)?;
    ct.mul(&cct_inv)?.mul(&btb_inv)?.mul(&bt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn monomial(e: usize) -> RatFunc {
        RatFunc::var_pow(e)
    }

    #[test]
    fn identity_inverse() {
        let i3 = Matrix::<BigRational>::identity(3);
        assert_eq!(mat_inverse(&i3).unwrap(), i3);
        let i3 = Matrix::<RatFunc>::identity(3);
        assert_eq!(mat_inverse(&i3).unwrap(), i3);
    }

    #[test]
    fn singular_reports_rank() {
        assert_eq!(
            mat_inverse(&qm(&[&[2, 2], &[2, 2]])),
            Err(Error::Singular { rank: 1 })
        );
        let s = Matrix::from_fn(2, 2, |_, _| monomial(1));
        assert_eq!(mat_inverse(&s), Err(Error::Singular { rank: 1 }));
    }

    #[test]
    fn circulant_gram_inverse() {
        // (n^2 - n) I + n J; inverse by hand:
        //   diag (n+1)/(n(n-1)(n+2)), off-diag -1/(n(n-1)(n+2))
        let g = Matrix::from_fn(3, 3, |i, j| monomial(if i == j { 2 } else { 1 }));
        let w = mat_inverse(&g).unwrap();
        let den = Poly::from_ints([0, -2, 1, 1]);
        let diag = RatFunc::new(Poly::from_ints([1, 1]), den.clone()).unwrap();
        let off = RatFunc::new(Poly::from_ints([-1]), den).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(w.get(i, j), if i == j { &diag } else { &off });
            }
        }
        assert_eq!(w.mul(&g).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn rational_function_entries_with_denominators() {
        let m = Matrix::from_rows(vec![
            vec![
                RatFunc::new(Poly::one(), Poly::from_ints([1, 1])).unwrap(),
                monomial(1),
            ],
            vec![
                RatFunc::from_int(2),
                RatFunc::new(Poly::one(), Poly::from_ints([0, 1])).unwrap(),
            ],
        ])
        .unwrap();
        let inv = mat_inverse(&m).unwrap();
        assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(2));
        assert_eq!(mat_inverse(&inv).unwrap(), m);
    }

    #[test]
    fn pseudo_inverse_rank_one() {
        // (c v v^T)+ = v v^T / (c |v|^4) with c = 2, v = (1, 1)
        let g = qm(&[&[2, 2], &[2, 2]]);
        let w = mat_pseudo_inverse(&g).unwrap();
        assert_eq!(w, Matrix::from_fn(2, 2, |_, _| q(1, 8)));
        assert_eq!(w.mul(&g).unwrap().mul(&w).unwrap(), w);
        assert_eq!(g.mul(&w).unwrap().mul(&g).unwrap(), g);
    }

    #[test]
    fn pseudo_inverse_edge_cases() {
        let z = Matrix::<BigRational>::zeros(3, 3);
        assert_eq!(mat_pseudo_inverse(&z).unwrap(), z);
        let m = qm(&[&[2, 1], &[1, 3]]);
        assert_eq!(mat_pseudo_inverse(&m).unwrap(), mat_inverse(&m).unwrap());
        assert_eq!(
            mat_pseudo_inverse(&qm(&[&[1, 2], &[0, 1]])),
            Err(Error::NotSymmetric)
        );
    }
}
