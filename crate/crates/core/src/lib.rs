//! Rayleigh-Ritz solutions of `HC = SCW` for non-orthogonal basis sets.
//!
//! Matrices are assembled exactly over the rationals and reduced to a
//! standard symmetric eigenproblem by one of three routes; the final
//! eigensolve runs in binary floating point at a caller-chosen precision.
//!
//! ```
//! use ritz_core::scalars::int;
//! use ritz_core::{build_matrices, solve_generalized, ProblemSpec, Route};
//!
//! let m = build_matrices(&ProblemSpec::new(int(0), 2).unwrap());
//! let sol = solve_generalized(&m.h, &m.s, Route::Ldlt, 128).unwrap();
//! assert_eq!(format!("{:.3}", sol.ritz_values[1]), "21.0");
//! ```

pub mod scalars;
pub mod matrix;
pub mod eigen;
pub mod model;
pub mod study;

pub use eigen::{solve_generalized, EigenError, RitzSolution, Route};
pub use matrix::{Matrix, SymMatrix};
pub use model::{build_matrices, ProblemMatrices, ProblemSpec};
pub use scalars::{PFloat, Rational};
pub use study::{run_convergence, ConvergenceReport};
