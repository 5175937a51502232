//! `magnus`: convergence studies, series identities, post-Lie axiom sweeps
//! and autonomization checks.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, and 2 for
//! configuration errors.

mod autonomize;
mod converge;
mod output;
mod postlie;
mod series;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magnus_core::problem::ProblemFile;
use magnus_core::{MatFn, MatPoly, Method, Rational, STANDARD_METHODS};
use thiserror::Error;

use crate::output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] magnus_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "magnus", version, about = "Magnus expansions and Lie-group integrators for Y' = A(t) Y")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error against a reference solution as the step count grows.
    Converge(RunArgs),
    /// Tree-basis series and their exact identities.
    Series(SeriesArgs),
    /// Exact checks on the post-Lie algebra of time-dependent fields.
    Postlie(PostlieArgs),
    /// Augmented autonomous solve against the direct solve.
    Autonomize(RunArgs),
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct RunArgs {
    /// JSON problem file with the polynomial coefficients of A(t).
    #[arg(long)]
    problem: PathBuf,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_METHODS.map(String::from))]
    methods: Vec<String>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long = "t-end", default_value_t = 1.0, allow_negative_numbers = true)]
    t_end: f64,
    /// Comma-separated, strictly increasing step counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 40, 80])]
    steps: Vec<usize>,
    /// Tolerance of the reference solution.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Validated configuration shared by `converge` and `autonomize`.
pub struct RunConfig {
    pub problem: MatPoly<Rational>,
    pub field: MatFn<f64>,
    pub methods: Vec<(String, Method)>,
    pub t0: f64,
    pub t_end: f64,
    pub steps: Vec<usize>,
    pub tol: f64,
}

impl RunArgs {
    fn validate(&self) -> CliResult<RunConfig> {
        let problem = ProblemFile::load(&self.problem).map_err(|e| CliError::Config(e.to_string()))?;
        if self.methods.is_empty() {
            return Err(CliError::Config("no methods given".into()));
        }
        let methods = self
            .methods
            .iter()
            .map(|name| {
                Method::by_name(name.trim())
                    .map(|m| (name.trim().to_string(), m))
                    .map_err(|e| CliError::Config(e.to_string()))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if self.steps.is_empty() || self.steps[0] == 0 || self.steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config("steps must be positive and strictly increasing".into()));
        }
        if !(self.t0.is_finite() && self.t_end.is_finite() && self.t_end > self.t0) {
            return Err(CliError::Config("need finite t0 < t-end".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Config("tol must be positive".into()));
        }
        Ok(RunConfig {
            field: MatFn::from_poly(problem.clone()),
            problem,
            methods,
            t0: self.t0,
            t_end: self.t_end,
            steps: self.steps.clone(),
            tol: self.tol,
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesCheck {
    /// Pre-Lie Magnus series and its defining fixed point.
    Omega,
    /// Inverse series; substitution in both orders gives the generator.
    Inverse,
    /// Fourth term against the two-term grafting formula.
    Omega4,
    /// Time-one flow of the Magnus series of h f is the Euler step.
    EulerBackward,
}

#[derive(Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    check: SeriesCheck,
    #[arg(long, default_value_t = 5)]
    order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PostlieCheck {
    /// Both post-Lie axioms for the connection and the pointwise bracket.
    Axioms,
    /// The same for the adjoint product and the negated bracket.
    Adjoint,
    /// Iterated connection against scaled derivatives.
    Beauty,
    /// The post-Lie Magnus series at t = 0 against the classical terms.
    GeometricMagnus,
}

#[derive(Args)]
pub struct PostlieArgs {
    #[arg(long, value_enum)]
    check: PostlieCheck,
    /// Polynomial degree of random inputs.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Ladder length or series order.
    #[arg(long, default_value_t = 5)]
    order: usize,
    /// Random triples for the axiom sweeps.
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// What a command found: whether every check held.
pub struct Verdict {
    pub pass: bool,
    pub summary: String,
}

fn run(cli: Cli) -> CliResult<Verdict> {
    match cli.command {
        Command::Converge(args) => converge::run(&args.validate()?, &args.output),
        Command::Autonomize(args) => autonomize::run(&args.validate()?, &args.output),
        Command::Series(args) => series::run(args.check, args.order, &args.output),
        Command::Postlie(args) => postlie::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(verdict) => {
            eprintln!("{} {}", if verdict.pass { "PASS" } else { "FAIL" }, verdict.summary);
            if verdict.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
