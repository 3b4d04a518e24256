//! `ritz`: solve, tabulate and check Rayleigh-Ritz eigenvalues for the
//! particle in a box with a linear potential, `−½ψ'' + λxψ = Eψ`.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | could not write the output |
//! | 2 | invalid arguments |
//! | 3 | solver failure |
//! | 4 | Ritz values increased with basis size |
//! | 5 | a verification check failed |

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ritz_core::eigen::Route;
use ritz_core::scalars::{parse_rational, DecimalRounding, Rational, MAX_PI_PRECISION, MIN_PRECISION};
use ritz_core::study::NumberFormat;

pub use report::{ReportDocument, ResidualDocument, RowDocument};

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const MONOTONE: i32 = 4;
    pub const VERIFY: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "ritz", version, about = "Rayleigh-Ritz eigenvalues in a non-orthogonal polynomial basis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ritz values and residual diagnostics for one basis size
    Solve(SolveArgs),
    /// Ritz values over a range of basis sizes
    Converge(ConvergeArgs),
    /// Check the two-function problem against its closed-form solution
    Verify(VerifyArgs),
    /// Exact matrix elements with quadrature cross-checks
    Elements(ElementsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rounding {
    /// Drop digits past the last one shown
    Truncate,
    /// Round to nearest, ties to even
    HalfEven,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Working precision in bits
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_PI_PRECISION as i64))]
    pub precision: u32,
    /// Reduction to a standard eigenproblem
    #[arg(long, default_value = "ldlt", value_parser = parse_route)]
    pub route: Route,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Significant digits shown
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=200))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Rounding::Truncate)]
    pub rounding: Rounding,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    pub fn number_format(&self) -> NumberFormat {
        NumberFormat {
            digits: self.digits as usize,
            rounding: match self.rounding {
                Rounding::Truncate => DecimalRounding::TowardZero,
                Rounding::HalfEven => DecimalRounding::HalfEven,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Potential strength, as a fraction (`1/2`) or decimal (`0.5`)
    #[arg(long, default_value = "0", value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Rational,
    /// Basis size
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Number of Ritz values shown (default: all)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub states: Option<u32>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value = "0", value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Rational,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_min: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub states: u32,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Bound for the Ritz values, residuals, spectra and unitarity checks
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Bound for the entrywise square-root check
    #[arg(long, default_value_t = 1e-6)]
    pub sqrt_tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ElementsArgs {
    #[arg(long, default_value = "0", value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Rational,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Precision of the quadrature cross-check
    #[arg(long, default_value_t = 113, value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_PI_PRECISION as i64))]
    pub precision: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse()
}

/// A failed command: what to print and which exit code to return.
#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub(crate) fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// What a command produced: the main output, diagnostics for standard error
/// and the exit code.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub text: String,
    pub notes: String,
    pub code: i32,
}

/// Parses `args` (program name first) and runs the command. Output goes to
/// `out` unless `--output` names a file.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = target.write_all(rendered.as_bytes());
            return if code == 0 { exit::OK } else { exit::USAGE };
        }
    };
    let destination = match &cli.command {
        Command::Solve(a) => a.output.output.clone(),
        Command::Converge(a) => a.output.output.clone(),
        Command::Elements(a) => a.output.output.clone(),
        Command::Verify(_) => None,
    };
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Converge(a) => commands::converge(a),
        Command::Verify(a) => commands::verify(a),
        Command::Elements(a) => commands::elements(a),
    };
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            return failure.code;
        }
    };
    let _ = err.write_all(outcome.notes.as_bytes());
    let written = match destination {
        Some(path) => std::fs::write(&path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            exit::IO
        }
    }
}
