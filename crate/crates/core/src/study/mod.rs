//! Convergence studies: Ritz values across a range of basis sizes, checked
//! for the monotone upper-bound behaviour and compared against reference
//! spectra.

mod format;

pub use format::{format_value, to_csv, to_table, NumberFormat};

use rayon::prelude::*;
use thiserror::Error;

use crate::eigen::{solve_generalized, tol, EigenError, Route};
use crate::model::{build_matrices, ModelError, ProblemSpec, ReferenceSpectrum};
use crate::scalars::{PFloat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StudyError {
    #[error("invalid basis range {n_min}..={n_max} for {states} states (need 1 <= states <= n_min <= n_max)")]
    InvalidRange { n_min: usize, n_max: usize, states: usize },
    #[error("solve failed at N = {n}: {source}")]
    Solver { n: usize, source: EigenError },
    #[error("report tracks {report} states, reference has {reference}")]
    StateCountMismatch { report: usize, reference: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The lowest `states` Ritz values at one basis size.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub values: Vec<PFloat>,
}

/// Ritz values for consecutive basis sizes, rows in increasing `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub lambda: Rational,
    pub rows: Vec<ConvergenceRow>,
    pub states: usize,
    pub precision: u32,
    pub route: Route,
}

/// Solves every basis size in `n_min..=n_max` independently and keeps the
/// lowest `states` Ritz values of each. Rows are computed in parallel.
pub fn run_convergence(
    lambda: &Rational,
    n_min: usize,
    n_max: usize,
    states: usize,
    precision: u32,
    route: Route,
) -> Result<ConvergenceReport, StudyError> {
    if states == 0 || states > n_min || n_min > n_max {
        return Err(StudyError::InvalidRange { n_min, n_max, states });
    }
    let results: Vec<Result<ConvergenceRow, StudyError>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let matrices = build_matrices(&ProblemSpec::new(lambda.clone(), n)?);
            let mut sol = solve_generalized(&matrices.h, &matrices.s, route, precision)
                .map_err(|source| StudyError::Solver { n, source })?;
            sol.ritz_values.truncate(states);
            Ok(ConvergenceRow {
                n,
                values: sol.ritz_values,
            })
        })
        .collect();
    // first failure in N order, whatever order the workers finished in
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport {
        lambda: lambda.clone(),
        rows,
        states,
        precision,
        route,
    })
}

/// `W_m` grew between two consecutive rows by more than the tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneViolation {
    /// 1-based state index.
    pub state: usize,
    pub from_n: usize,
    pub to_n: usize,
    pub increase: PFloat,
}

/// Every (consecutive row pair, state) where the Ritz value increases by more
/// than `tol(p)·max(1, |W|)`.
pub fn check_monotone(report: &ConvergenceReport) -> Vec<MonotoneViolation> {
    let p = report.precision;
    let tolerance = tol(p);
    let one = PFloat::one(p);
    let mut violations = Vec::new();
    for pair in report.rows.windows(2) {
        let (before, after) = (&pair[0], &pair[1]);
        for (m, (w0, w1)) in before.values.iter().zip(&after.values).enumerate() {
            let increase = w1 - w0;
            let scale = w0.abs().max(one.clone());
            if increase > &tolerance * &scale {
                violations.push(MonotoneViolation {
                    state: m + 1,
                    from_n: before.n,
                    to_n: after.n,
                    increase,
                });
            }
        }
    }
    violations
}

/// `W_m(N) − E_m` for every row of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct GapTable {
    pub rows: Vec<ConvergenceRow>,
    pub precision: u32,
}

impl GapTable {
    pub fn min_gap(&self) -> Option<&PFloat> {
        self.rows.iter().flat_map(|r| &r.values).min()
    }

    /// `(n, state)` pairs whose Ritz value lies below the reference by more
    /// than `tol(p)·max(1, |E|)`.
    pub fn below_reference(&self, reference: &ReferenceSpectrum) -> Vec<(usize, usize)> {
        let tolerance = tol(self.precision);
        let one = PFloat::one(self.precision);
        let mut out = Vec::new();
        for row in &self.rows {
            for (m, (gap, e)) in row.values.iter().zip(&reference.values).enumerate() {
                let bound = &tolerance * &e.abs().max(one.clone());
                if gap < &-bound {
                    out.push((row.n, m + 1));
                }
            }
        }
        out
    }
}

pub fn compare_to_reference(report: &ConvergenceReport, reference: &ReferenceSpectrum) -> Result<GapTable, StudyError> {
    if reference.values.len() < report.states {
        return Err(StudyError::StateCountMismatch {
            report: report.states,
            reference: reference.values.len(),
        });
    }
    let p = report.precision;
    let rows = report
        .rows
        .iter()
        .map(|row| ConvergenceRow {
            n: row.n,
            values: row
                .values
                .iter()
                .zip(&reference.values)
                .map(|(w, e)| w - &e.with_precision(p))
                .collect(),
        })
        .collect();
    Ok(GapTable { rows, precision: p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exact_reference, Provenance};
    use crate::scalars::int;

    fn fixed(x: &PFloat) -> String {
        format_value(x, &NumberFormat::default())
    }

    #[test]
    fn one_function_basis() {
        let report = run_convergence(&int(0), 1, 1, 1, 128, Route::Ldlt).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].n, 1);
        assert_eq!(fixed(&report.rows[0].values[0]), "5.000000000");
    }

    #[test]
    fn small_table_is_monotone_and_above_the_box() {
        let report = run_convergence(&int(0), 2, 7, 2, 128, Route::Ldlt).unwrap();
        assert_eq!(report.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 3, 4, 5, 6, 7]);
        assert!(check_monotone(&report).is_empty());
        let reference = exact_reference(&int(0), 2, 128).unwrap();
        let gaps = compare_to_reference(&report, &reference).unwrap();
        assert!(gaps.below_reference(&reference).is_empty());
        assert!(!gaps.min_gap().unwrap().is_negative());
    }

    #[test]
    fn reversed_rows_violate_once_per_pair_and_state() {
        let mut report = run_convergence(&int(0), 2, 5, 2, 128, Route::Ldlt).unwrap();
        // values that repeat between sizes (parity stair-steps) are not decreases
        let decreasing = report
            .rows
            .windows(2)
            .flat_map(|w| w[0].values.iter().zip(&w[1].values).map(|(a, b)| b < a).collect::<Vec<_>>())
            .filter(|&d| d)
            .count();
        let values: Vec<Vec<PFloat>> = report.rows.iter().rev().map(|r| r.values.clone()).collect();
        for (row, v) in report.rows.iter_mut().zip(values) {
            row.values = v;
        }
        let violations = check_monotone(&report);
        assert_eq!(violations.len(), decreasing);
        assert!(decreasing >= 3);
        assert!(violations.iter().all(|v| v.increase.is_positive() && v.to_n == v.from_n + 1));
    }

    #[test]
    fn gaps_against_self_are_zero() {
        let report = run_convergence(&int(1), 3, 3, 3, 96, Route::Ldlt).unwrap();
        let reference = ReferenceSpectrum {
            lambda: int(1),
            values: report.rows[0].values.clone(),
            provenance: Provenance::Table,
        };
        let gaps = compare_to_reference(&report, &reference).unwrap();
        assert!(gaps.rows[0].values.iter().all(PFloat::is_zero));
        let short = ReferenceSpectrum {
            values: reference.values[..1].to_vec(),
            ..reference
        };
        assert_eq!(
            compare_to_reference(&report, &short),
            Err(StudyError::StateCountMismatch { report: 3, reference: 1 })
        );
    }

    #[test]
    fn invalid_ranges() {
        for (lo, hi, k) in [(6, 4, 1), (2, 3, 3), (1, 1, 0)] {
            assert_eq!(
                run_convergence(&int(0), lo, hi, k, 64, Route::Ldlt),
                Err(StudyError::InvalidRange { n_min: lo, n_max: hi, states: k })
            );
        }
    }
}
