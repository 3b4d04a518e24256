use std::fmt::Write;

use super::ConvergenceReport;
use crate::scalars::{DecimalRounding, PFloat};

/// Significant digits and how the rest are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumberFormat {
    pub digits: usize,
    pub rounding: DecimalRounding,
}

impl Default for NumberFormat {
    /// Ten digits, cut rather than rounded, which is how the reference
    /// tables for this problem are printed.
    fn default() -> Self {
        NumberFormat {
            digits: 10,
            rounding: DecimalRounding::TowardZero,
        }
    }
}

pub fn format_value(x: &PFloat, format: &NumberFormat) -> String {
    x.to_decimal_with(format.digits, format.rounding).to_fixed_string()
}

fn header(states: usize) -> Vec<String> {
    std::iter::once("N".to_string())
        .chain((1..=states).map(|m| format!("E{m}")))
        .collect()
}

fn cells(report: &ConvergenceReport, format: &NumberFormat) -> Vec<Vec<String>> {
    report
        .rows
        .iter()
        .map(|row| {
            std::iter::once(row.n.to_string())
                .chain(row.values.iter().map(|v| format_value(v, format)))
                .collect()
        })
        .collect()
}

/// `N,E1,...,Ek` followed by one line per basis size.
pub fn to_csv(report: &ConvergenceReport, format: &NumberFormat) -> String {
    let mut out = header(report.states).join(",");
    out.push('\n');
    for row in cells(report, format) {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns separated by two spaces.
pub fn to_table(report: &ConvergenceReport, format: &NumberFormat) -> String {
    let head = header(report.states);
    let body = cells(report, format);
    let widths: Vec<usize> = (0..head.len())
        .map(|c| body.iter().map(|r| r[c].len()).chain([head[c].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in std::iter::once(&head).chain(&body) {
        let padded: Vec<String> = line.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        writeln!(out, "{}", padded.join("  ")).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::Route;
    use crate::study::ConvergenceRow;
    use crate::scalars::int;

    fn report() -> ConvergenceReport {
        ConvergenceReport {
            lambda: int(0),
            rows: vec![
                ConvergenceRow {
                    n: 9,
                    values: vec![PFloat::from_f64(4.9348022005, 64), PFloat::from_f64(100.25, 64)],
                },
                ConvergenceRow {
                    n: 10,
                    values: vec![PFloat::from_f64(4.5, 64), PFloat::from_f64(-0.125, 64)],
                },
            ],
            states: 2,
            precision: 64,
            route: Route::Ldlt,
        }
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            to_csv(&report(), &NumberFormat::default()),
            "N,E1,E2\n9,4.934802200,100.2500000\n10,4.500000000,-0.1250000000\n"
        );
        let short = NumberFormat {
            digits: 3,
            rounding: DecimalRounding::HalfEven,
        };
        assert_eq!(to_csv(&report(), &short), "N,E1,E2\n9,4.93,100\n10,4.50,-0.125\n");
    }

    #[test]
    fn table_is_aligned() {
        let text = to_table(&report(), &NumberFormat::default());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
        assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), ["N", "E1", "E2"]);
        assert!(lines[2].ends_with("-0.1250000000"));
    }
}
