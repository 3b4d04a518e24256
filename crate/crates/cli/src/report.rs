//! JSON shape shared by `solve` and `converge`. Every number is a string in
//! the requested display format, so re-serializing a parsed report gives back
//! the same bytes.

use ritz_core::eigen::{Residuals, Route};
use ritz_core::scalars::{DecimalRounding, PFloat, Rational};
use ritz_core::study::{format_value, ConvergenceReport, NumberFormat};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub lambda: String,
    pub precision: u32,
    pub route: Route,
    pub rows: Vec<RowDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDocument {
    pub n: usize,
    pub values: Vec<String>,
}

/// Max-norm residuals, three significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualDocument {
    pub secular: String,
    pub overlap: String,
    pub hamiltonian: String,
    pub unitarity: String,
}

impl ResidualDocument {
    /// `unitarity` is preformatted since it may be unavailable.
    pub fn new(r: &Residuals, unitarity: String) -> Self {
        ResidualDocument {
            secular: short(&r.secular),
            overlap: short(&r.overlap),
            hamiltonian: short(&r.hamiltonian),
            unitarity,
        }
    }
}

pub(crate) fn short(x: &PFloat) -> String {
    format_value(
        x,
        &NumberFormat {
            digits: 3,
            rounding: DecimalRounding::HalfEven,
        },
    )
}

pub(crate) fn lambda_string(lambda: &Rational) -> String {
    lambda.to_string()
}

impl ReportDocument {
    pub fn from_report(report: &ConvergenceReport, format: &NumberFormat) -> Self {
        ReportDocument {
            lambda: lambda_string(&report.lambda),
            precision: report.precision,
            route: report.route,
            rows: report
                .rows
                .iter()
                .map(|row| RowDocument {
                    n: row.n,
                    values: row.values.iter().map(|v| format_value(v, format)).collect(),
                })
                .collect(),
            residuals: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ritz_core::scalars::{int, ratio};
    use ritz_core::study::run_convergence;

    #[test]
    fn json_round_trip_is_byte_identical() {
        let report = run_convergence(&ratio(3, 4), 2, 4, 2, 128, Route::Invsqrt).unwrap();
        let doc = ReportDocument::from_report(&report, &NumberFormat::default());
        let text = doc.to_json();
        let parsed: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_json(), text);
        assert!(text.contains("\"lambda\": \"3/4\""));
        assert!(text.contains("\"route\": \"invsqrt\""));
        assert!(!text.contains("residuals"));
    }

    #[test]
    fn integer_lambda_has_no_denominator() {
        assert_eq!(lambda_string(&int(1)), "1");
        assert_eq!(lambda_string(&ratio(-1, 2)), "-1/2");
    }
}
