//! `bilinext` — verification suites and one-off computations for the
//! bilinear-extension library.
//!
//! Two subcommands:
//!
//! * `suite`   — run a named randomized verification suite and emit a JSON
//!   (or CSV) report; exit code 0 when every trial passes, 1 otherwise.
//! * `compute` — run a single computation (operator norm, bilinear norm,
//!   tensor crossnorms, or an extension) on a JSON instance file.
//!
//! Usage errors and IO failures exit with code 2.

mod compute;
mod report;
mod suites;

use clap::{Parser, Subcommand};
use std::fmt;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bilinext",
    version,
    about = "Norm computations and verification suites for bilinear-map extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite over seeded random instances.
    Suite(suites::SuiteArgs),
    /// Run one computation on a JSON instance file.
    Compute(compute::ComputeArgs),
}

/// CLI-level failures; all of them exit with the usage/IO code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: String, message: String },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }

    fn io(path: &std::path::Path, err: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Suite(args) => suites::run(args),
        Command::Compute(args) => compute::run(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
