//! Command-line front end: argument parsing, report assembly and
//! rendering as JSON, CSV or aligned text.

pub mod args;
mod commands;
pub mod output;

use std::ffi::OsString;

use clap::Parser;
use protower_core::Error;

pub use args::{Cli, Command, Format};

/// Exit status and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Core(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Core(Error::SizeCap { .. } | Error::LevelCap { .. }) => 2,
            CliError::Core(Error::Invariant(_)) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Tower(_) => "tower",
        Command::Fpdim(_) => "fpdim",
        Command::Scan(_) => "scan",
        Command::King(_) => "king",
        Command::Bounds(_) => "bounds",
        Command::Decompose(_) => "decompose",
    }
}

pub fn run(cli: &Cli) -> RunOutput {
    let outcome = match &cli.command {
        Command::Tower(a) => commands::tower(a),
        Command::Fpdim(a) => commands::fpdim(a),
        Command::Scan(a) => commands::scan(a),
        Command::King(a) => commands::king(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Decompose(a) => commands::decompose(a),
    };
    match outcome {
        Ok(out) => {
            let stdout = output::render(cli.format, command_name(&cli.command), &out);
            match out.violation {
                Some(v) => RunOutput {
                    code: 3,
                    stdout,
                    stderr: format!("error: internal invariant violated: {v}\n"),
                },
                None => RunOutput {
                    code: 0,
                    stdout,
                    stderr: String::new(),
                },
            }
        }
        Err(e) => RunOutput {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// exit with status 1; `--help` and `--version` with 0.
pub fn run_from_args<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                RunOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                RunOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
