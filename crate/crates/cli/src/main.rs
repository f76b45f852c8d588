//! `kgosc` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error,
//! 4 physical precondition violated.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, RunConfig};

#[derive(Debug)]
pub enum CliError {
    VerificationFailed,
    Usage(String),
    Io(String),
    Physical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::VerificationFailed => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Physical(_) => 4,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(phys) => commands::cmd_spectrum(&RunConfig::from_args(&phys)?),
        Command::Wavefunction {
            phys,
            branch,
            r_max,
            grid_points,
        } => commands::cmd_wavefunction(&RunConfig::from_args(&phys)?, branch, r_max, grid_points),
        Command::Normalize(phys) => commands::cmd_normalize(&RunConfig::from_args(&phys)?),
        Command::Verify(args) => commands::cmd_verify(&args),
        Command::Sweep {
            phys,
            axis,
            start,
            stop,
            steps,
        } => commands::cmd_sweep(&RunConfig::from_args(&phys)?, &axis, start, stop, steps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::VerificationFailed => eprintln!("kgosc: verification failed"),
                CliError::Usage(msg) => eprintln!("kgosc: usage error: {msg}"),
                CliError::Io(msg) => eprintln!("kgosc: I/O error: {msg}"),
                CliError::Physical(msg) => eprintln!("kgosc: physical precondition violated: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
