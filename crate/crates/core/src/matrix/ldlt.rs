//! Exact `A = L·D·Lᵀ` over the rationals.
//!
//! No pivoting: the pivots are the ratios of consecutive leading principal
//! minors, so their signs certify (or refute) positive definiteness.

use num_traits::{One, Signed, Zero};

use super::{Matrix, MatrixError, SymMatrix};
use crate::scalars::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct LdltFactors {
    /// Unit lower triangular.
    pub lower: Matrix<Rational>,
    pub diag: Vec<Rational>,
}

impl LdltFactors {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `L·diag(D)·Lᵀ`.
    pub fn reconstruct(&self) -> Matrix<Rational> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            (0..=i.min(j)).fold(Rational::zero(), |acc, k| {
                acc + &self.lower[(i, k)] * &self.diag[k] * &self.lower[(j, k)]
            })
        })
    }

    pub fn determinant(&self) -> Rational {
        self.diag.iter().fold(Rational::one(), |acc, d| acc * d)
    }

    pub fn all_pivots_positive(&self) -> bool {
        self.diag.iter().all(Signed::is_positive)
    }

    /// Exact `L⁻¹` by forward substitution (also unit lower triangular).
    pub fn lower_inverse(&self) -> Matrix<Rational> {
        let n = self.dim();
        let mut inv = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        for j in 0..n {
            for i in j + 1..n {
                let mut acc = Rational::zero();
                for k in j..i {
                    acc += &self.lower[(i, k)] * &inv[(k, j)];
                }
                inv[(i, j)] = -acc;
            }
        }
        inv
    }
}

pub fn ldlt(a: &SymMatrix<Rational>) -> Result<LdltFactors, MatrixError> {
    let n = a.dim();
    let mut lower = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let mut diag: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = a.get(j, j).clone();
        for k in 0..j {
            d -= &lower[(j, k)] * &lower[(j, k)] * &diag[k];
        }
        if d.is_zero() {
            return Err(MatrixError::ZeroPivot(j + 1));
        }
        for i in j + 1..n {
            let mut v = a.get(i, j).clone();
            for k in 0..j {
                v -= &lower[(i, k)] * &lower[(j, k)] * &diag[k];
            }
            lower[(i, j)] = v / &d;
        }
        diag.push(d);
    }
    Ok(LdltFactors { lower, diag })
}

/// Exact determinant. Uses the LDLᵀ pivots when every leading minor is
/// nonsingular, otherwise pivoted elimination.
pub fn gram_determinant(s: &SymMatrix<Rational>) -> Rational {
    match ldlt(s) {
        Ok(f) => f.determinant(),
        Err(_) => pivoted_determinant(s.to_dense()),
    }
}

fn pivoted_determinant(mut m: Matrix<Rational>) -> Rational {
    let n = m.rows();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)].clone();
                m[(col, j)] = m[(pivot_row, j)].clone();
                m[(pivot_row, j)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(col, col)].clone();
        det *= &pivot;
        for r in col + 1..n {
            let factor = &m[(r, col)] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let delta = &factor * &m[(col, j)];
                m[(r, j)] -= delta;
            }
        }
    }
    det
}

/// True iff every LDLᵀ pivot is strictly positive.
pub fn is_positive_definite(a: &SymMatrix<Rational>) -> bool {
    ldlt(a).is_ok_and(|f| f.all_pivots_positive())
}
