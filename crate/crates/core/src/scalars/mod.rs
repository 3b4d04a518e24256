//! Scalar layer: exact rationals for assembly, precision-tagged binary floats
//! for eigensolves.

mod pfloat;
mod rational;

pub use pfloat::{Decimal, DecimalRounding, PFloat, MAX_PI_PRECISION, MIN_PRECISION};
pub use rational::{int, parse_rational, ratio, signum, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("square root of a negative operand")]
    NegativeOperand,
    #[error("precision {requested} bits exceeds the supported maximum of {max}")]
    PrecisionUnsupported { requested: u32, max: u32 },
    #[error("cannot parse `{0}` as an exact rational")]
    Parse(String),
}

/// `r` correctly rounded to `precision` bits.
pub fn to_float(r: &Rational, precision: u32) -> PFloat {
    PFloat::from_rational(r, precision)
}

/// Default convergence tolerance `2^(-p/2)` for precision `p`.
pub fn default_tol(precision: u32) -> PFloat {
    PFloat::one(precision).mul_pow2(-((precision / 2) as i64))
}
