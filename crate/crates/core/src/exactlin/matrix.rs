//! Dense matrices with exact entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A dense row-major matrix.
///
/// Zero-sized shapes (`0 x n`, `n x 0`) are legal and show up constantly at
/// the ends of chain complexes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Matrix with arbitrary-precision integer entries; the carrier for every
/// differential and chain map.
pub type IntMatrix = Matrix<BigInt>;

/// Matrix with rational entries; used for maps expressed on homology
/// generators, where coordinates over the rationals need not be integral.
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
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

    /// Builds a matrix from a list of rows. All rows must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Result<Self> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Shape(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
        }
        Ok(Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Selects the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Selects the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// Block diagonal matrix `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Matrix::block(
            a,
            &Matrix::zeros(a.rows, b.cols),
            &Matrix::zeros(b.rows, a.cols),
            b,
        )
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
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

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> Mul<&'a T, Output = T>,
{
    /// Matrix product. Panics on a shape mismatch, which is always a logic
    /// error in this crate (shapes come from validated complexes).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let prod = a.clone() * b;
                    out.data[idx] = std::mem::replace(&mut out.data[idx], T::zero()) + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x;
                    }
                }
                acc
            })
            .collect()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T>,
{
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> Sub<&'a T, Output = T>,
{
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Neg<Output = T>,
{
    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }
}

impl IntMatrix {
    /// Convenience constructor from small integers.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triples. Out-of-range indices
    /// and duplicate positions are rejected; zero values are dropped.
    pub fn from_triples(rows: usize, cols: usize, triples: &[(usize, usize, BigInt)]) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, cols);
        let mut seen = std::collections::BTreeSet::new();
        for (r, c, v) in triples {
            if *r >= rows || *c >= cols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            if !seen.insert((*r, *c)) {
                return Err(Error::Shape(format!("duplicate entry at ({r}, {c})")));
            }
            m.set(*r, *c, v.clone());
        }
        Ok(m)
    }

    /// Canonical sparse form: nonzero entries sorted by (row, col).
    pub fn to_triples(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        self.map(|a| a * s)
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|a| BigRational::from_integer(a.clone()))
    }

    pub fn max_abs(&self) -> BigInt {
        use num_traits::Signed;
        self.data
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl RatMatrix {
    /// Returns the integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|a| a.is_integer()) {
            Some(self.map(|a| a.to_integer()))
        } else {
            None
        }
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let b = a.transpose();
        let c = a.mul(&b);
        assert_eq!(c, IntMatrix::from_i64(2, 2, &[14, 32, 32, 77]));
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = IntMatrix::zeros(0, 3);
        let b = IntMatrix::zeros(3, 2);
        assert_eq!(a.mul(&b).shape(), (0, 2));
        let c = IntMatrix::zeros(2, 0);
        let d = IntMatrix::zeros(0, 4);
        assert_eq!(c.mul(&d), IntMatrix::zeros(2, 4));
    }

    #[test]
    fn triples_are_validated() {
        let t = vec![(0, 0, BigInt::from(1)), (0, 0, BigInt::from(2))];
        assert!(IntMatrix::from_triples(1, 1, &t).is_err());
        let t = vec![(2, 0, BigInt::from(1))];
        assert!(IntMatrix::from_triples(2, 2, &t).is_err());
        let t = vec![(1, 1, BigInt::from(5)), (0, 1, BigInt::from(-1))];
        let m = IntMatrix::from_triples(2, 2, &t).unwrap();
        let back = m.to_triples();
        assert_eq!(back[0], (0, 1, BigInt::from(-1)));
        assert_eq!(back[1], (1, 1, BigInt::from(5)));
    }
}
