//! `stablepot` — command-line driver for the fractional-Laplacian potential
//! theory toolkit: harmonic-measure solves, kernel estimates, boundary
//! classification, and the audit suite, over JSON-configured domains.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 unhealthy or
//! failed (flagged censoring, failed audit, failed selftest), 3 an
//! `Undetermined` classification verdict.

mod commands;
mod config;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{AuditKind, RunContext};
use config::ConfigDoc;

/// A diagnostic that terminates the run with exit code 1.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<stablepot::Error> for CliError {
    fn from(e: stablepot::Error) -> CliError {
        CliError {
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "stablepot",
    version,
    about = "Potential theory of the fractional Laplacian: sampling, kernels, audits",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every config-driven subcommand; each overrides the
/// matching config field.
#[derive(Args)]
struct RunArgs {
    /// Run configuration document (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Base seed for the counter-based generator (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Walk budget per estimate (command-specific default otherwise).
    #[arg(long)]
    walks: Option<u64>,
    /// Rayon worker threads (env STABLEPOT_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output path (standard output otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit one JSON document instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Harmonic extension of a payoff at the configured start points.
    Solve(RunArgs),
    /// Poisson kernel against the configured exterior target.
    Pkernel(RunArgs),
    /// Expected exit time at the configured start points.
    ExitTime(RunArgs),
    /// Green function against the configured pole.
    Green(RunArgs),
    /// Martin kernel ratio ladder toward a boundary point.
    Martin(RunArgs),
    /// Accessibility of a boundary point or of infinity.
    Classify(RunArgs),
    /// Inequality and identity audits.
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Deterministic acceptance checks plus a reduced statistical suite.
    Selftest {
        /// Run only the deterministic checks.
        #[arg(long)]
        quick: bool,
        /// Rayon worker threads (env STABLEPOT_WORKERS, then all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Scale the normalization-check integrand (mutation hook).
        #[arg(long, hide = true)]
        perturb_poisson_const: Option<f64>,
    },
}

/// Resolves the worker count (flag, then environment, then config) and
/// pins the global rayon pool when one is requested.
fn configure_workers(flag: Option<usize>, from_config: Option<usize>) -> Result<(), CliError> {
    let env = match std::env::var("STABLEPOT_WORKERS") {
        Ok(s) => Some(s.parse::<usize>().map_err(|_| {
            CliError::config(format!("STABLEPOT_WORKERS must be a thread count, got `{s}`"))
        })?),
        Err(_) => None,
    };
    if let Some(n) = flag.or(env).or(from_config) {
        if n == 0 {
            return Err(CliError::config("worker count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn context(args: &RunArgs) -> Result<RunContext, CliError> {
    let (doc, params) = ConfigDoc::load(&args.config)?;
    configure_workers(args.workers, doc.workers)?;
    Ok(RunContext {
        seed: args.seed.or(doc.seed).unwrap_or(0),
        walks: args.walks.or(doc.walks),
        out: args.out.clone().or_else(|| doc.out.clone().map(PathBuf::from)),
        json: args.json,
        walk_cfg: doc.walk.clone().unwrap_or_default().build(),
        params,
        doc,
    })
}

fn run() -> Result<i32, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return Ok(1);
        }
        Err(e) => {
            // --help / --version.
            print!("{e}");
            return Ok(0);
        }
    };
    match &cli.command {
        Command::Solve(args) => commands::solve(&context(args)?),
        Command::Pkernel(args) => commands::pkernel(&context(args)?),
        Command::ExitTime(args) => commands::exit_time(&context(args)?),
        Command::Green(args) => commands::green(&context(args)?),
        Command::Martin(args) => commands::martin(&context(args)?),
        Command::Classify(args) => commands::classify(&context(args)?),
        Command::Audit { kind, args } => commands::audit(&context(args)?, *kind),
        Command::Selftest {
            quick,
            workers,
            perturb_poisson_const,
        } => {
            configure_workers(*workers, None)?;
            selftest::run(*quick, *perturb_poisson_const)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
