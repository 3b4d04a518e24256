use std::fmt::Write;

use ritz_core::eigen::{
    jacobi_eigensym, matrix_sqrt, residuals, solve_generalized, tol, unitarity_check, EigenError,
};
use ritz_core::matrix::{Matrix, SymMatrix};
use ritz_core::model::{build_matrices, quadrature_element, ProblemSpec};
use ritz_core::scalars::{int, ratio, PFloat, Rational};
use ritz_core::study::{
    check_monotone, format_value, run_convergence, to_csv, to_table, ConvergenceReport, ConvergenceRow, StudyError,
};
use serde::Serialize;

use crate::report::{lambda_string, short, ReportDocument, ResidualDocument};
use crate::{exit, ConvergeArgs, ElementsArgs, Failure, Format, Outcome, SolveArgs, VerifyArgs};

fn solver_failure(e: EigenError) -> Failure {
    Failure::new(exit::SOLVER, format!("solver failed: {e}"))
}

/// Right-aligns every column, two spaces apart.
fn align(lines: &[Vec<String>]) -> String {
    let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| lines.iter().filter_map(|l| l.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in lines {
        let cells: Vec<String> = line.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  "));
    }
    out
}

pub(crate) fn solve(a: &SolveArgs) -> Result<Outcome, Failure> {
    let n = a.n as usize;
    let states = a.states.map_or(n, |k| k as usize);
    if states > n {
        return Err(Failure::new(exit::USAGE, format!("--states {states} exceeds the basis size {n}")));
    }
    let p = a.numeric.precision;
    let spec = ProblemSpec::new(a.lambda.clone(), n).map_err(|e| Failure::new(exit::USAGE, e.to_string()))?;
    let m = build_matrices(&spec);
    let sol = solve_generalized(&m.h, &m.s, a.numeric.route, p).map_err(solver_failure)?;
    let res = residuals(&m.h, &m.s, &sol).map_err(solver_failure)?;
    // S^(1/2) can be out of reach at low precision even when the solve succeeded
    let unitarity = unitarity_check(&m.s, &sol.coefficients);

    let report = ConvergenceReport {
        lambda: a.lambda.clone(),
        rows: vec![ConvergenceRow {
            n,
            values: sol.ritz_values[..states].to_vec(),
        }],
        states,
        precision: p,
        route: a.numeric.route,
    };
    let format = a.output.number_format();
    let unitarity_text = match &unitarity {
        Ok(u) => short(u),
        Err(_) => "unavailable".to_string(),
    };
    let mut outcome = Outcome::default();
    if let Err(e) = &unitarity {
        let _ = writeln!(outcome.notes, "warning: unitarity check skipped: {e}");
    }
    outcome.text = match a.output.format {
        Format::Csv => to_csv(&report, &format),
        Format::Json => {
            let mut doc = ReportDocument::from_report(&report, &format);
            doc.residuals = Some(ResidualDocument::new(&res, unitarity_text));
            doc.to_json()
        }
        Format::Table => {
            let mut lines = vec![vec!["k".to_string(), "W_k".to_string()]];
            for (k, w) in report.rows[0].values.iter().enumerate() {
                lines.push(vec![(k + 1).to_string(), format_value(w, &format)]);
            }
            let mut text = format!(
                "lambda = {}, N = {n}, precision = {p} bits, route = {}\n",
                lambda_string(&a.lambda),
                a.numeric.route
            );
            text.push_str(&align(&lines));
            text.push('\n');
            for (label, value) in [
                ("|HC - SCW|", short(&res.secular)),
                ("|C'SC - I|", short(&res.overlap)),
                ("|C'HC - W|", short(&res.hamiltonian)),
                ("|U'U - I|", unitarity_text),
            ] {
                let _ = writeln!(text, "{label:<12}{value}");
            }
            text
        }
    };
    Ok(outcome)
}

pub(crate) fn converge(a: &ConvergeArgs) -> Result<Outcome, Failure> {
    let report = run_convergence(
        &a.lambda,
        a.n_min as usize,
        a.n_max as usize,
        a.states as usize,
        a.numeric.precision,
        a.numeric.route,
    )
    .map_err(|e| match e {
        StudyError::Solver { .. } => Failure::new(exit::SOLVER, e.to_string()),
        _ => Failure::new(exit::USAGE, e.to_string()),
    })?;
    let format = a.output.number_format();
    let mut outcome = Outcome {
        text: match a.output.format {
            Format::Csv => to_csv(&report, &format),
            Format::Json => ReportDocument::from_report(&report, &format).to_json(),
            Format::Table => to_table(&report, &format),
        },
        ..Outcome::default()
    };
    for v in check_monotone(&report) {
        let _ = writeln!(
            outcome.notes,
            "monotonicity violation: E{} rose by {} from N = {} to N = {}",
            v.state,
            short(&v.increase),
            v.from_n,
            v.to_n
        );
        outcome.code = exit::MONOTONE;
    }
    Ok(outcome)
}

struct Check {
    name: &'static str,
    error: PFloat,
    bound: PFloat,
}

fn max_of(values: impl IntoIterator<Item = PFloat>, p: u32) -> PFloat {
    values.into_iter().fold(PFloat::zero(p), |acc, x| acc.max(x.abs()))
}

fn sqrt(x: PFloat) -> PFloat {
    x.sqrt().expect("closed-form radicands are positive")
}

/// The two-function problem at `λ = 0` checked against its closed forms.
pub(crate) fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    if !(a.tolerance >= 0.0 && a.sqrt_tolerance >= 0.0) {
        return Err(Failure::new(exit::USAGE, "tolerances must be non-negative"));
    }
    let p = a.numeric.precision;
    let q = |num: i64, den: i64| PFloat::from_rational(&ratio(num, den), p);
    let bound = PFloat::from_f64(a.tolerance, p);
    let sqrt_bound = PFloat::from_f64(a.sqrt_tolerance, p);

    let m = build_matrices(&ProblemSpec::new(int(0), 2).expect("N = 2"));
    let sol = solve_generalized(&m.h, &m.s, a.numeric.route, p).map_err(solver_failure)?;
    let mut checks = Vec::new();

    let w = &sol.ritz_values;
    checks.push(Check {
        name: "Ritz values W = (5, 21)",
        error: max_of([(&w[0] - &q(5, 1)) / q(5, 1), (&w[1] - &q(21, 1)) / q(21, 1)], p),
        bound: bound.clone(),
    });

    // C'SC = I, C'HC = W, and C against sqrt(30)·[[1, sqrt7], [0, -2 sqrt7]] up to column signs
    let res = residuals(&m.h, &m.s, &sol).map_err(solver_failure)?;
    let s30 = sqrt(q(30, 1));
    let s210 = sqrt(q(210, 1));
    let printed = Matrix::from_rows(vec![vec![s30.clone(), s210.clone()], vec![PFloat::zero(p), -(&s210 * &q(2, 1))]])
        .expect("2x2");
    let scale = printed.max_abs();
    let mut column_error = Vec::new();
    for j in 0..2 {
        let (c, e) = (sol.coefficients.column(j), printed.column(j));
        let plus = max_of(c.iter().zip(&e).map(|(x, y)| x - y), p);
        let minus = max_of(c.iter().zip(&e).map(|(x, y)| x + y), p);
        column_error.push(plus.min(minus) / scale.clone());
    }
    checks.push(Check {
        name: "C'SC = I and C'HC = W",
        error: max_of([res.overlap.clone(), res.hamiltonian.clone(), res.secular.clone()].into_iter().chain(column_error), p),
        bound: bound.clone(),
    });

    let spectrum = |s: &SymMatrix<Rational>, expected: [PFloat; 2]| -> Result<PFloat, Failure> {
        let got = jacobi_eigensym(&s.to_float(p), &tol(p)).map_err(solver_failure)?;
        Ok(max_of(got.values.iter().zip(&expected).map(|(x, y)| x - y), p))
    };
    let r74 = sqrt(q(74, 1));
    checks.push(Check {
        name: "S eigenvalues (9 -+ sqrt74)/420",
        error: spectrum(&m.s, [(&q(9, 1) - &r74) / q(420, 1), (&q(9, 1) + &r74) / q(420, 1)])?,
        bound: bound.clone(),
    });
    let r34 = sqrt(q(34, 1));
    checks.push(Check {
        name: "H eigenvalues (7 -+ sqrt34)/60",
        error: spectrum(&m.h, [(&q(7, 1) - &r34) / q(60, 1), (&q(7, 1) + &r34) / q(60, 1)])?,
        bound: bound.clone(),
    });

    let root = matrix_sqrt(&m.s.to_float(p)).map_err(solver_failure)?;
    let t = &q(7, 8880) * &sqrt(q(7, 1));
    let diag0 = sqrt(&q(233, 8880) + &t);
    let off = sqrt(&q(21, 2960) - &t);
    let diag1 = sqrt(&q(151, 62160) + &t);
    checks.push(Check {
        name: "S^(1/2) closed form",
        error: max_of(
            [
                root.get(0, 0) - &diag0,
                root.get(0, 1) - &off,
                root.get(1, 1) - &diag1,
            ],
            p,
        ),
        bound: sqrt_bound,
    });

    let unitarity = unitarity_check(&m.s, &sol.coefficients).map_err(solver_failure)?;
    checks.push(Check {
        name: "U = S^(1/2)C is orthogonal",
        error: unitarity,
        bound,
    });

    let mut outcome = Outcome::default();
    let lines: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            let pass = c.error <= c.bound;
            if !pass {
                outcome.code = exit::VERIFY;
            }
            vec![
                if pass { "PASS" } else { "FAIL" }.to_string(),
                format!("{:<34}", c.name),
                format!("error {}", short(&c.error)),
                format!("bound {}", short(&c.bound)),
            ]
        })
        .collect();
    for line in lines {
        let _ = writeln!(outcome.text, "{}", line.join("  ").trim_end());
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct ElementDocument {
    i: usize,
    j: usize,
    overlap: String,
    hamiltonian: String,
    overlap_delta: String,
    hamiltonian_delta: String,
}

#[derive(Serialize)]
struct ElementsDocument {
    lambda: String,
    n: usize,
    quadrature_nodes: usize,
    precision: u32,
    elements: Vec<ElementDocument>,
}

/// Exact `S_ij`, `H_ij` and their distance from a Gauss-Legendre evaluation.
pub(crate) fn elements(a: &ElementsArgs) -> Result<Outcome, Failure> {
    let n = a.n as usize;
    let p = a.precision;
    let spec = ProblemSpec::new(a.lambda.clone(), n).map_err(|e| Failure::new(exit::USAGE, e.to_string()))?;
    let m = build_matrices(&spec);
    // enough nodes for the highest-degree integrand, i = j = n
    let nodes = n + 3;
    let mut elements = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let quad = quadrature_element(i, j, &a.lambda, nodes, p).map_err(|e| Failure::new(exit::USAGE, e.to_string()))?;
            let s = m.s.get(i - 1, j - 1);
            let h = m.h.get(i - 1, j - 1);
            elements.push(ElementDocument {
                i,
                j,
                overlap: s.to_string(),
                hamiltonian: h.to_string(),
                overlap_delta: short(&(&quad.overlap - &PFloat::from_rational(s, p)).abs()),
                hamiltonian_delta: short(&(&quad.hamiltonian - &PFloat::from_rational(h, p)).abs()),
            });
        }
    }
    let text = match a.output.format {
        Format::Json => {
            let doc = ElementsDocument {
                lambda: lambda_string(&a.lambda),
                n,
                quadrature_nodes: nodes,
                precision: p,
                elements,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("elements serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text = String::from("i,j,S,H,dS,dH\n");
            for e in &elements {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{}",
                    e.i, e.j, e.overlap, e.hamiltonian, e.overlap_delta, e.hamiltonian_delta
                );
            }
            text
        }
        Format::Table => {
            let mut lines = vec![["i", "j", "S_ij", "H_ij", "|dS|", "|dH|"].map(String::from).to_vec()];
            lines.extend(elements.into_iter().map(|e| {
                vec![
                    e.i.to_string(),
                    e.j.to_string(),
                    e.overlap,
                    e.hamiltonian,
                    e.overlap_delta,
                    e.hamiltonian_delta,
                ]
            }));
            align(&lines)
        }
    };
    Ok(Outcome {
        text,
        ..Outcome::default()
    })
}
