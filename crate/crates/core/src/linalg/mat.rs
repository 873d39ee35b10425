use std::fmt;

use crate::error::{FesError, Result};
use crate::linalg::sparse::{rref_of, SparseVec};
use crate::linalg::subspace::Subspace;
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FesError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from integer rows; all rows must have equal length.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| S::int(v))
            })
            .collect();
        Self { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> SparseVec<S> {
        SparseVec::from_dense(&self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn column(&self, j: usize) -> SparseVec<S> {
        SparseVec::from_entries((0..self.rows).map(|i| (i, self[(i, j)].clone())).collect())
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

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(FesError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.times(&other[(k, j)]);
                    out[(i, j)] += &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            let mut acc = S::zero();
            for (j, x) in v.iter() {
                acc += &self[(i, j)].times(x);
            }
            out.push((i, acc));
        }
        SparseVec::from_entries(out)
    }

    /// Determinant by elimination with row exchanges; `1` for the empty matrix.
    pub fn determinant(&self) -> Result<S> {
        if self.rows != self.cols {
            return Err(FesError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for p in 0..n {
            let Some(pivot_row) = (p..n).find(|&i| !a[(i, p)].is_zero()) else {
                return Ok(S::zero());
            };
            if pivot_row != p {
                for j in 0..n {
                    a.data.swap(p * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = a[(p, p)].clone();
            det *= &pivot;
            for i in p + 1..n {
                let f = a[(i, p)].over(&pivot);
                if f.is_zero() {
                    continue;
                }
                for j in p..n {
                    let t = f.times(&a[(p, j)]);
                    a[(i, j)] -= &t;
                }
            }
        }
        Ok(det)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Symmetric positive definiteness via the pivots of elimination without row exchanges.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        for p in 0..n {
            let pivot = a[(p, p)].clone();
            if !pivot.is_positive() {
                return false;
            }
            for i in p + 1..n {
                let f = a[(i, p)].over(&pivot);
                if f.is_zero() {
                    continue;
                }
                for j in p..n {
                    let t = f.times(&a[(p, j)]);
                    a[(i, j)] -= &t;
                }
            }
        }
        true
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> fmt::Display for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank and the reduced row echelon form of `m`.
pub fn rank_and_echelon<S: Scalar>(m: &Mat<S>) -> (usize, Mat<S>) {
    let rows = rref_of((0..m.rows()).map(|i| m.row(i)));
    let rank = rows.len();
    let mut e = Mat::zeros(m.rows(), m.cols());
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter() {
            e[(i, j)] = v.clone();
        }
    }
    (rank, e)
}

/// Null space of `m` as a canonical subspace of `S^cols`.
pub fn kernel<S: Scalar>(m: &Mat<S>) -> Subspace<S> {
    let cols = m.cols();
    let domain: Vec<_> = (0..cols).map(SparseVec::unit).collect();
    let images: Vec<_> = (0..cols).map(|j| m.column(j)).collect();
    Subspace::full(cols).kernel_of_map_with(&images, m.rows(), &domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type M = Mat<Rational>;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_and_echelon(&M::identity(2)).0, 2);
        assert_eq!(rank_and_echelon(&M::zeros(3, 4)).0, 0);
        let (r, e) = rank_and_echelon(&M::from_int_rows(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, 1);
        assert_eq!(e, M::from_int_rows(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&M::identity(2)).dim(), 0);
        assert_eq!(kernel(&M::zeros(2, 3)).dim(), 3);
        let k = kernel(&M::from_int_rows(&[&[1, 1, 0]]));
        assert_eq!(k.dim(), 2);
        let v = SparseVec::from_dense(&[Rational::int(1), Rational::int(-1), Rational::int(0)]);
        assert!(k.contains(&v));
    }

    #[test]
    fn positive_definite_by_pivots() {
        assert!(M::from_int_rows(&[&[2, 1], &[1, 2]]).is_positive_definite());
        assert!(!M::from_int_rows(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(!M::from_int_rows(&[&[1, 2], &[0, 1]]).is_positive_definite());
    }

    #[test]
    fn determinants() {
        assert_eq!(M::identity(0).determinant().unwrap(), Rational::int(1));
        assert_eq!(M::from_int_rows(&[&[0, 1], &[1, 0]]).determinant().unwrap(), Rational::int(-1));
        assert_eq!(
            M::from_int_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).determinant().unwrap(),
            Rational::int(6)
        );
        assert!(M::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = M::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = a.transpose();
        assert_eq!(a.mul(&b).unwrap(), M::from_int_rows(&[&[5, 11], &[11, 25]]));
        assert!(a.mul(&M::zeros(3, 1)).is_err());
    }
}
