mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

/// Why a command did not succeed; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or inputs, I/O errors, or failed rows (exit 1).
    Usage(String),
    /// A solver or optimizer did not converge; best-effort artifacts were still written (exit 2).
    NotConverged(String),
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure::Usage(message.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::NotConverged(_) => 2,
        }
    }
}

impl From<mubvqe::Error> for Failure {
    fn from(e: mubvqe::Error) -> Self {
        match e {
            mubvqe::Error::NotConverged { .. } => Failure::NotConverged(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Diag(a) => commands::diag(a),
        Command::Vqe(a) => commands::vqe(a),
        Command::Dqes(a) => commands::dqes(a),
        Command::Scan(a) => commands::scan(a),
        Command::Mubs(a) => commands::mubs(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::NotConverged(m) => eprintln!("not converged: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
