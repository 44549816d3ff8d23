mod cmd;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fswap_core::reproduce::DEFAULT_SEED;

/// Fermionic swap network compiler and resource estimator.
#[derive(Parser)]
#[command(name = "fswap", version)]
struct Cli {
    /// Seed for randomized probe states and fixtures.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one Trotter step into a gate list.
    Compile(cmd::compile::Args),
    /// Gate counts against the number of unit cells.
    Estimate(cmd::estimate::Args),
    /// Check a compiled step against its exact reference.
    Verify(cmd::verify::Args),
    /// Gate counts over a log-spaced range of cell counts.
    Sweep(cmd::sweep::Args),
    /// Run the regression checks with built-in data.
    Reproduce(cmd::reproduce::Args),
}

/// How a command finished when it did not hit an input error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile(a) => cmd::compile::run(a),
        Command::Estimate(a) => cmd::estimate::run(a),
        Command::Verify(a) => cmd::verify::run(a, cli.seed),
        Command::Sweep(a) => cmd::sweep::run(a),
        Command::Reproduce(a) => cmd::reproduce::run(a, cli.seed),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
