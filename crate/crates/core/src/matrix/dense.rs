use std::ops::{Index, IndexMut};

use super::{MatrixError, Scalar};
use crate::scalars::{to_float, PFloat, Rational};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(MatrixError::Empty);
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(MatrixError::DimensionMismatch {
                    lhs: (n_rows, n_cols),
                    rhs: (1, row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// `n × n` identity whose entries share the kind (and precision) of `like`.
    pub fn identity(n: usize, like: &T) -> Self {
        let (zero, one) = (like.zero_like(), like.one_like());
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let zero = values[0].zero_like();
        Self::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                values[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[T]) {
        assert_eq!(values.len(), self.rows);
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = v.clone();
        }
    }

    /// Transpose; for the real scalars supported here this is also the adjoint.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch {
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let rhs_cols: Vec<Vec<&T>> = (0..rhs.cols)
            .map(|j| (0..rhs.rows).map(|k| &rhs[(k, j)]).collect())
            .collect();
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let row: Vec<&T> = self.row(i).iter().collect();
            T::dot(&row, &rhs_cols[j])
        }))
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>, MatrixError> {
        if self.cols != v.len() {
            return Err(MatrixError::DimensionMismatch {
                lhs: self.shape(),
                rhs: (v.len(), 1),
            });
        }
        let v: Vec<&T> = v.iter().collect();
        Ok((0..self.rows)
            .map(|i| {
                let row: Vec<&T> = self.row(i).iter().collect();
                T::dot(&row, &v)
            })
            .collect())
    }

    /// `selfᵀ · m · self`, the congruence used throughout the generalized problem.
    pub fn congruence(&self, m: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
        self.transpose().matmul(&m.matmul(self)?)
    }
}

impl Matrix<Rational> {
    pub fn to_float(&self, precision: u32) -> Matrix<PFloat> {
        self.map(|x| to_float(x, precision))
    }
}

impl Matrix<PFloat> {
    /// Largest absolute entry.
    pub fn max_abs(&self) -> PFloat {
        let zero = self.data[0].zero_like();
        self.data
            .iter()
            .map(PFloat::abs)
            .fold(zero, |acc, x| if x > acc { x } else { acc })
    }

    /// `max_ij |self_ij − other_ij|`.
    pub fn max_abs_diff(&self, other: &Matrix<PFloat>) -> Result<PFloat, MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch {
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let diff = Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        };
        Ok(diff.max_abs())
    }

    pub fn precision(&self) -> u32 {
        self.data.iter().map(PFloat::precision).max().unwrap_or(53)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Symmetric matrix stored as its packed upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    upper: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// `f(i, j)` is only called for `i <= j`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        Ok(SymMatrix { dim, upper })
    }

    /// Accepts a square matrix that is exactly symmetric.
    pub fn from_dense(m: &Matrix<T>) -> Result<Self, MatrixError> {
        if m.rows() != m.cols() {
            return Err(MatrixError::DimensionMismatch {
                lhs: m.shape(),
                rhs: (m.cols(), m.rows()),
            });
        }
        for i in 0..m.rows() {
            for j in i + 1..m.cols() {
                if m[(i, j)] != m[(j, i)] {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        Self::from_upper_fn(m.rows(), |i, j| m[(i, j)].clone())
    }

    /// Keeps the upper triangle of `m` and mirrors it.
    pub fn from_upper_of(m: &Matrix<T>) -> Result<Self, MatrixError> {
        if m.rows() != m.cols() {
            return Err(MatrixError::DimensionMismatch {
                lhs: m.shape(),
                rhs: (m.cols(), m.rows()),
            });
        }
        Self::from_upper_fn(m.rows(), |i, j| m[(i, j)].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.dim, "index ({i}, {j}) out of bounds");
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.upper[self.offset(i, j)]
    }

    pub fn to_dense(&self) -> Matrix<T> {
        Matrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            dim: self.dim,
            upper: self.upper.iter().map(f).collect(),
        }
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>, MatrixError> {
        self.to_dense().matvec(v)
    }
}

impl SymMatrix<Rational> {
    pub fn to_float(&self, precision: u32) -> SymMatrix<PFloat> {
        self.map(|x| to_float(x, precision))
    }
}

impl SymMatrix<PFloat> {
    pub fn precision(&self) -> u32 {
        self.upper.iter().map(PFloat::precision).max().unwrap_or(53)
    }

    pub fn max_abs(&self) -> PFloat {
        self.to_dense().max_abs()
    }
}
