//! `fga-lab`: run verification suites, compute single objects, and tabulate bounds.

mod compute;
mod config;
mod error;
mod output;
mod table;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::compute::Query;
use crate::config::{Flags, RunConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "fga-lab", version, about = "Formal group algebra exponents for types B and D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run suites over every (root system, law, degree) cell; exit 1 on any failure
    Verify(Flags),
    /// Print one object as JSON
    Compute {
        #[arg(value_enum)]
        query: Query,
        #[command(flatten)]
        flags: Flags,
    },
    /// Tabulate r_d, ζ_d, η_d and the computed multipliers
    Report(Flags),
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify(flags) => verify::run(&RunConfig::from_flags(flags)?),
        Command::Compute { query, flags } => compute::run(query, &RunConfig::from_flags(flags)?),
        Command::Report(flags) => table::run(&RunConfig::from_flags(flags)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fga-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
