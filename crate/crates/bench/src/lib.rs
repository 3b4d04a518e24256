//! Shared fixtures for the benchmarks under `benches/`.

use ritz_core::model::{build_matrices, ProblemMatrices, ProblemSpec};
use ritz_core::scalars::int;

/// Exact `H` and `S` for integer `λ` and `n` basis functions.
pub fn pencil(lambda: i64, n: usize) -> ProblemMatrices {
    build_matrices(&ProblemSpec::new(int(lambda), n).expect("n >= 1"))
}
