//! Reference eigenvalues the Ritz values are compared against.

use num_traits::{One, Zero};

use super::ModelError;
use crate::scalars::{parse_rational, PFloat, Rational};

/// Converged lowest four eigenvalues for `λ = 1`, to ten significant digits.
/// No closed form exists; these come from the `N = 20` basis.
pub const TABLE_LAMBDA_ONE: [&str; 4] = ["5.432607855", "20.23986304", "44.91360966", "79.45707400"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `E_n = n²π²/2`, the particle in a unit box.
    Analytic,
    /// Ten-digit converged values stored as data.
    Table,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSpectrum {
    pub lambda: Rational,
    pub values: Vec<PFloat>,
    pub provenance: Provenance,
}

/// The lowest `k` exact (or converged) eigenvalues for `λ ∈ {0, 1}`.
pub fn exact_reference(lambda: &Rational, k: usize, precision: u32) -> Result<ReferenceSpectrum, ModelError> {
    if lambda.is_zero() {
        let pi = PFloat::pi(precision)?;
        let half_pi_sq = (&pi * &pi).mul_pow2(-1);
        let values = (1..=k as i64)
            .map(|n| &half_pi_sq * &PFloat::from_i64(n * n, precision))
            .collect();
        return Ok(ReferenceSpectrum {
            lambda: lambda.clone(),
            values,
            provenance: Provenance::Analytic,
        });
    }
    if lambda.is_one() {
        if k > TABLE_LAMBDA_ONE.len() {
            return Err(ModelError::StatesUnavailable {
                requested: k,
                available: TABLE_LAMBDA_ONE.len(),
            });
        }
        let values = TABLE_LAMBDA_ONE[..k]
            .iter()
            .map(|s| PFloat::from_rational(&parse_rational(s).expect("valid literal"), precision))
            .collect();
        return Ok(ReferenceSpectrum {
            lambda: lambda.clone(),
            values,
            provenance: Provenance::Table,
        });
    }
    Err(ModelError::UnsupportedLambda(lambda.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, ratio};

    #[test]
    fn particle_in_a_box() {
        let r = exact_reference(&int(0), 2, 128).unwrap();
        assert_eq!(r.provenance, Provenance::Analytic);
        assert_eq!(format!("{:.10}", r.values[0]), "4.934802201");
        assert_eq!(format!("{:.10}", r.values[1]), "19.73920880");
        let r = exact_reference(&int(0), 1, 256).unwrap();
        assert!(format!("{:.72}", r.values[0]).starts_with("4.934802200544679309417245499938075567656849703620395313206"));
    }

    #[test]
    fn linear_potential_table() {
        let r = exact_reference(&int(1), 1, 128).unwrap();
        assert_eq!(r.provenance, Provenance::Table);
        assert_eq!(format!("{:.10}", r.values[0]), "5.432607855");
        assert!(exact_reference(&int(1), 4, 64).unwrap().values.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            exact_reference(&int(1), 5, 64),
            Err(ModelError::StatesUnavailable { requested: 5, available: 4 })
        );
    }

    #[test]
    fn other_lambdas_are_unsupported() {
        assert!(matches!(exact_reference(&ratio(1, 2), 1, 64), Err(ModelError::UnsupportedLambda(_))));
        assert!(matches!(exact_reference(&int(0), 1, 700), Err(ModelError::Scalar(_))));
    }
}
