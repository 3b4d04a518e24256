//! The model problem `−½ψ'' + λxψ = Eψ` on `[0, 1]` with `ψ(0) = ψ(1) = 0`,
//! expanded in the non-orthogonal basis `f_i(x) = xⁱ(1 − x)`, `i = 1, 2, …`.
//!
//! Basis indices are 1-based throughout this module, as in the usual
//! statement of the problem; assembled matrices use 0-based storage.

mod polynomial;
mod quadrature;
mod reference;

pub use polynomial::Polynomial;
pub use quadrature::{gauss_legendre, quadrature_element, QuadratureElements};
pub use reference::{exact_reference, Provenance, ReferenceSpectrum, TABLE_LAMBDA_ONE};

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::SymMatrix;
use crate::scalars::{Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("basis size must be at least 1")]
    EmptyBasis,
    #[error("{given} quadrature nodes cannot integrate this element exactly; need at least {required}")]
    InsufficientNodes { given: usize, required: usize },
    #[error("no reference spectrum for lambda = {0}")]
    UnsupportedLambda(String),
    #[error("reference spectrum has {available} states, {requested} requested")]
    StatesUnavailable { requested: usize, available: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Potential strength and basis size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub lambda: Rational,
    pub basis_size: usize,
}

impl ProblemSpec {
    pub fn new(lambda: Rational, basis_size: usize) -> Result<Self, ModelError> {
        if basis_size == 0 {
            return Err(ModelError::EmptyBasis);
        }
        Ok(ProblemSpec { lambda, basis_size })
    }

    pub fn basis(&self) -> BasisSpec {
        BasisSpec {
            family: BasisFamily::PolynomialDirichlet,
            size: self.basis_size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisFamily {
    /// `f_i(x) = xⁱ(1 − x)`.
    PolynomialDirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub family: BasisFamily,
    pub size: usize,
}

impl BasisSpec {
    /// Basis function `i` (1-based) as an exact polynomial.
    pub fn function(&self, i: usize) -> Polynomial {
        assert!(i >= 1 && i <= self.size, "basis index {i} outside 1..={}", self.size);
        match self.family {
            BasisFamily::PolynomialDirichlet => Polynomial::dirichlet_monomial(i),
        }
    }
}

/// The assembled pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemMatrices {
    pub h: SymMatrix<Rational>,
    pub s: SymMatrix<Rational>,
}

fn frac(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// `⟨f_i|f_j⟩ = 2 / ((i+j+1)(i+j+2)(i+j+3))`.
pub fn overlap_element(i: usize, j: usize) -> Rational {
    assert!(i >= 1 && j >= 1, "basis indices are 1-based");
    let m = BigInt::from(i + j);
    frac(BigInt::from(2), (&m + 1) * (&m + 2) * (&m + 3))
}

/// `⟨f_i|H|f_j⟩ = ij / ((i+j)(i+j+1)(i+j−1)) + 2λ / ((i+j+2)(i+j+3)(i+j+4))`.
pub fn hamiltonian_element(i: usize, j: usize, lambda: &Rational) -> Rational {
    assert!(i >= 1 && j >= 1, "basis indices are 1-based");
    let m = BigInt::from(i + j);
    let kinetic = frac(BigInt::from(i * j), &m * (&m + 1) * (&m - 1));
    let potential = frac(BigInt::from(2), (&m + 2) * (&m + 3) * (&m + 4));
    kinetic + potential * lambda
}

/// Exact `N × N` Hamiltonian and overlap matrices.
pub fn build_matrices(spec: &ProblemSpec) -> ProblemMatrices {
    let n = spec.basis_size;
    let h = SymMatrix::from_upper_fn(n, |i, j| hamiltonian_element(i + 1, j + 1, &spec.lambda))
        .expect("basis size is at least 1");
    let s = SymMatrix::from_upper_fn(n, |i, j| overlap_element(i + 1, j + 1)).expect("basis size is at least 1");
    ProblemMatrices { h, s }
}
