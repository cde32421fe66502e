//! Smith normal form, determinants and lattice quotients over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::engine;
use super::group::FGAbelianGroup;
use super::ring::Integers;
use super::span::{Span, Subquotient};
use super::{IntMatrix, Ring};
use crate::error::Result;

/// `s = u * m * v` with `s` diagonal, `s[i][i]` dividing `s[i+1][i+1]`,
/// and `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

fn to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows, cols).expect("rectangular")
}

/// Smith normal form of an integer matrix.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let (r, c) = m.shape();
    let rows = engine::rows_from_int(&Integers, m);
    let sm = engine::smith(&Integers, rows, r, c);
    let mut s = IntMatrix::zeros(r, c);
    for (i, d) in sm.diag.into_iter().enumerate() {
        s.set(i, i, d);
    }
    SmithForm {
        s,
        u: to_matrix(sm.u, r),
        v: to_matrix(sm.v, c),
    }
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Isomorphism type of `span(num) / span(den)` for integer lattices given by
/// matrix columns.
pub fn subquotient(num: &IntMatrix, den: &IntMatrix) -> Result<FGAbelianGroup> {
    subquotient_over(Ring::Integers, num, den)
}

pub fn subquotient_over(ring: Ring, num: &IntMatrix, den: &IntMatrix) -> Result<FGAbelianGroup> {
    let q = Subquotient::new(Span::new(ring, num), Span::new(ring, den))?;
    Ok(q.group())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn examples() {
        let f = snf(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]));
        assert_eq!(f.s, IntMatrix::from_i64(2, 2, &[2, 0, 0, 4]));
        assert_eq!(f.u.mul(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8])).mul(&f.v), f.s);
        let id = IntMatrix::identity(3);
        let f = snf(&id);
        assert_eq!((f.s, f.u, f.v), (id.clone(), id.clone(), id));
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(snf(&z).s, z);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8])), BigInt::from(-8));
        assert_eq!(determinant(&IntMatrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1])), BigInt::from(-1));
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn subquotient_examples() {
        let g = subquotient(&IntMatrix::identity(1), &IntMatrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(g.to_string(), "Z/2");
        let g = subquotient(&IntMatrix::identity(2), &IntMatrix::identity(2)).unwrap();
        assert!(g.is_zero());
        let g = subquotient(&IntMatrix::identity(2), &IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])).unwrap();
        assert_eq!(g.to_string(), "Z/6");
        let e = subquotient(&IntMatrix::from_i64(1, 1, &[2]), &IntMatrix::identity(1));
        assert!(matches!(e, Err(Error::NotASublattice(_))));
    }
}
