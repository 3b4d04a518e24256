//! Symmetric eigensolver and reductions of the pencil `(H, S)` to Ritz values.

mod diagnostics;
mod generalized;
mod jacobi;
mod nonsym;
mod sqrt;

pub use diagnostics::{residuals, unitarity_check, Residuals};
pub use generalized::{normalize_s, solve_generalized, RitzSolution};
pub use jacobi::{jacobi_eigensym, Spectrum, MAX_SWEEPS};
pub use sqrt::{matrix_inv_sqrt, matrix_sqrt};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixError, Scalar, SymMatrix};
use crate::scalars::{PFloat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    /// The overlap matrix has a zero or negative LDLᵀ pivot at leading minor `k`.
    #[error("overlap matrix is not positive definite (pivot {pivot} is not positive)")]
    SingularOverlap { pivot: usize },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("dimension mismatch: H is {h}x{h}, S is {s}x{s}")]
    DimensionMismatch { h: usize, s: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("column {column} has non-positive S-norm")]
    ZeroNorm { column: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// How the generalized problem is reduced to a standard one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Symmetric orthogonalization: diagonalize `S^(-1/2) H S^(-1/2)`.
    Invsqrt,
    /// Exact congruence through the rational `L·D·Lᵀ` factors of `S`.
    Ldlt,
    /// Eigenpairs of the non-symmetric `S⁻¹H` by shifted inverse iteration.
    Nonsym,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Invsqrt, Route::Ldlt, Route::Nonsym];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Invsqrt => "invsqrt",
            Route::Ldlt => "ldlt",
            Route::Nonsym => "nonsym",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "invsqrt" => Ok(Route::Invsqrt),
            "ldlt" => Ok(Route::Ldlt),
            "nonsym" => Ok(Route::Nonsym),
            other => Err(format!("unknown route `{other}` (expected invsqrt, ldlt or nonsym)")),
        }
    }
}

/// Entries a pencil can be given in. Every `PFloat` is a dyadic rational, so
/// both kinds convert to `Rational` exactly.
pub trait PencilEntry: Scalar {
    fn to_exact(&self) -> Rational;
    fn to_pfloat(&self, precision: u32) -> PFloat;
}

impl PencilEntry for Rational {
    fn to_exact(&self) -> Rational {
        self.clone()
    }

    fn to_pfloat(&self, precision: u32) -> PFloat {
        PFloat::from_rational(self, precision)
    }
}

impl PencilEntry for PFloat {
    fn to_exact(&self) -> Rational {
        self.to_rational()
    }

    fn to_pfloat(&self, precision: u32) -> PFloat {
        self.with_precision(precision)
    }
}

pub(crate) fn exact_matrix<T: PencilEntry>(m: &SymMatrix<T>) -> SymMatrix<Rational> {
    m.map(PencilEntry::to_exact)
}

pub(crate) fn float_matrix<T: PencilEntry>(m: &SymMatrix<T>, precision: u32) -> SymMatrix<PFloat> {
    m.map(|x| x.to_pfloat(precision))
}

/// Default tolerance `2^(-p/2)`.
pub fn tol(precision: u32) -> PFloat {
    crate::scalars::default_tol(precision)
}

/// Relative width `2^(-p/3)` inside which Ritz values count as degenerate.
pub fn cluster_width(precision: u32) -> PFloat {
    PFloat::one(precision).mul_pow2(-((precision / 3) as i64))
}
