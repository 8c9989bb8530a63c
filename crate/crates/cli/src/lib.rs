//! Batch front end for the quasiline toolkit.
//!
//! Every run is described by a [`RunConfig`]; the same configuration always
//! produces byte-identical structured output. Exit codes: 0 success, 1 usage or
//! input error, 2 a mathematical failure (unbounded polyhedron, degenerate
//! cubic, contradictory record, failed hypothesis), 3 an internal invariant
//! failure.

mod commands;
mod inputs;
pub mod report;

use std::fmt::Display;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{Fields, Node, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Structured,
    Human,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "quasiline",
    version,
    about = "Exact computations on quasi-lines, toric quotients, and cubic threefolds"
)]
pub struct RunConfig {
    /// Seed for every sampled choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sections of the hyperplane divisor on the cyclic quotient of P^n.
    #[command(name = "quotient", alias = "appendix")]
    Quotient {
        #[arg(long)]
        n: i64,
        /// Largest accepted n.
        #[arg(long, default_value_t = 8)]
        max_n: i64,
    },
    /// Sampled extensions of the hyperplane function to a resolution of the quotient.
    #[command(name = "extensions", alias = "lemma-a2")]
    Extensions {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Splitting-type calculus.
    #[command(subcommand)]
    Bundle(BundleCommand),
    /// Lines through a point of a random cubic threefold.
    Cubic {
        /// Coefficients are drawn from [-bound, bound].
        #[arg(long, default_value_t = 9)]
        bound: i64,
        /// Use a reducible cubic instead (for testing the degenerate path).
        #[arg(long, hide = true)]
        reducible: bool,
    },
    /// Propagate invariants of a model.
    Models(ModelsArgs),
    /// Fan utilities.
    #[command(subcommand)]
    Fan(FanCommand),
}

#[derive(Debug, Clone, Args)]
pub struct TypeArg {
    /// Comma-separated exponents, e.g. 0,1,4.
    #[arg(long = "type", allow_hyphen_values = true)]
    pub splitting: String,
}

#[derive(Debug, Clone, Args)]
pub struct DivisorArgs {
    /// D . Y
    #[arg(long = "d", allow_hyphen_values = true)]
    pub d: i64,
    /// dim |D|
    #[arg(long = "dim-d", alias = "dimD", allow_hyphen_values = true)]
    pub dim_d: i64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum BundleCommand {
    /// Elementary transform at a general hyperplane of a fibre.
    Elm(TypeArg),
    /// Codimension-2 blow-ups down to a quasi-line.
    Plan(TypeArg),
    /// Top self-intersections of the splitting divisors.
    SelfInt(TypeArg),
    /// Splitting type from self-intersections and degree.
    Recover {
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Numerical rationality criterion.
    #[command(name = "rational", alias = "cor17")]
    Rational {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        dd: DivisorArgs,
        /// Dimension of X; defaults to the rank plus one.
        #[arg(long)]
        n: Option<i64>,
    },
    /// Numerical strong-rationality criterion.
    #[command(name = "strongly-rational", alias = "thm41")]
    StronglyRational {
        #[command(flatten)]
        dd: DivisorArgs,
        #[arg(long)]
        n: i64,
        /// Y is a quasi-line.
        #[arg(long)]
        quasiline: bool,
    },
    /// Point blow-ups reducing D . Y to one.
    #[command(name = "reduce", alias = "thm16")]
    Reduce {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        dd: DivisorArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ModelsArgs {
    /// A catalog entry by name. With neither this nor --record, the whole catalog.
    #[arg(long, group = "source")]
    pub builtin: Option<String>,
    /// A record file.
    #[arg(long, group = "source")]
    pub record: Option<PathBuf>,
    /// Dimension for catalog entries that take one.
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    /// Also write the propagated record to this file.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum FanCommand {
    Validate { fan: PathBuf },
    Desingularize { fan: PathBuf },
    Cartier { divisor: PathBuf },
    H0 { divisor: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Math(String),
    /// A mathematical failure that still has a report worth printing.
    #[error("{reason}")]
    Refuted { reason: String, report: Box<Report> },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub(crate) fn input(path: &Path, e: impl Display) -> Self {
        CliError::Input { path: path.to_path_buf(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 1,
            CliError::Math(_) | CliError::Refuted { .. } => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// Runs a parsed configuration.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    commands::dispatch(config)
}

impl RunConfig {
    pub fn render(&self, r: &Report) -> String {
        match self.format {
            Format::Structured => r.structured(),
            Format::Human => r.human(),
        }
    }
}

/// Result of a full command-line invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name), runs, renders, and maps errors
/// to exit codes. Panics inside a command become exit code 3.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation { code, stdout: text, stderr: String::new() }
            } else {
                Invocation { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| run(&config)))
        .unwrap_or_else(|p| Err(CliError::Internal(panic_message(p.as_ref()))));
    let (code, text, err) = match result {
        Ok(report) => (0, config.render(&report), String::new()),
        Err(CliError::Refuted { reason, report }) => (2, config.render(&report), format!("error: {reason}\n")),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    };
    if text.is_empty() {
        return Invocation { code, stdout: String::new(), stderr: err };
    }
    match &config.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Invocation { code, stdout: String::new(), stderr: err },
            Err(e) => {
                Invocation { code: 1, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) }
            }
        },
        None => Invocation { code, stdout: text, stderr: err },
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}
