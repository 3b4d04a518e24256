//! Dense matrices over rationals or precision-tagged floats.
//!
//! Indices are 0-based here. Basis-function indices in the model layer are
//! 1-based and converted when matrices are assembled.

mod dense;
mod ldlt;

pub use dense::{Matrix, SymMatrix};
pub use ldlt::{gram_determinant, is_positive_definite, ldlt, LdltFactors};

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalars::{PFloat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    /// Leading minor `k` (1-based) is singular, so the unpivoted
    /// factorization cannot continue.
    #[error("zero pivot at leading minor {0}")]
    ZeroPivot(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix dimension must be at least 1")]
    Empty,
}

/// Element type of [`Matrix`] and [`SymMatrix`].
///
/// Dot products are the only arithmetic the containers need; for `PFloat`
/// they are exact with a single final rounding.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    /// `Σ lhs_k · rhs_k` over equally long, non-empty sequences.
    fn dot(lhs: &[&Self], rhs: &[&Self]) -> Self;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn one_like(&self) -> Self {
        Rational::one()
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn dot(lhs: &[&Self], rhs: &[&Self]) -> Self {
        lhs.iter()
            .zip(rhs)
            .fold(Rational::zero(), |acc, (a, b)| acc + *a * *b)
    }
}

impl Scalar for PFloat {
    fn zero_like(&self) -> Self {
        PFloat::zero(self.precision())
    }

    fn one_like(&self) -> Self {
        PFloat::one(self.precision())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn dot(lhs: &[&Self], rhs: &[&Self]) -> Self {
        let precision = lhs
            .iter()
            .chain(rhs)
            .map(|x| x.precision())
            .max()
            .expect("dot product of empty sequences");
        PFloat::dot(lhs.iter().copied().zip(rhs.iter().copied()), precision)
    }
}
