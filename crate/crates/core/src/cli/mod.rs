//! The `fracpois` command-line front end.
//!
//! Subcommands `pmf`, `pgf`, `survival`, `verify` and `simulate` share one
//! set of parameter flags. Values are resolved with the precedence
//! command-line flag > JSON file named by `FRACPOIS_CONFIG` > built-in
//! default, and validated before any computation starts. Output is built in
//! memory and written only when the whole command succeeded.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;

use crate::error::Error;

pub use commands::{cmd_pgf, cmd_pmf, cmd_simulate, cmd_survival, cmd_verify, format_float};
pub use config::{Cli, Command, FileConfig, OutputFormat, ParamArgs, RunConfig, CONFIG_ENV};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const BAD_PARAMS: i32 = 2;
    pub const CONVERGENCE: i32 = 3;
    pub const UNSUPPORTED: i32 = 4;
}

/// What a run produced: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::InvalidParams(_) => exit::BAD_PARAMS,
        Error::Convergence(_) | Error::Truncation(_) | Error::Quadrature(_) => exit::CONVERGENCE,
        Error::Unsupported(_) => exit::UNSUPPORTED,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// `config_path` is the value of `FRACPOIS_CONFIG`, if set.
pub fn run<I, T>(args: I, config_path: Option<&Path>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::failure(exit::BAD_PARAMS, text),
            };
        }
    };
    let file = match config_path.map(FileConfig::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => return Outcome::failure(exit_code(&e), format!("error: {e}\n")),
    };
    let config = match RunConfig::resolve(&cli, &file) {
        Ok(c) => c,
        Err(e) => return Outcome::failure(exit_code(&e), format!("error: {e}\n")),
    };
    let result = match config.command {
        Command::Pmf(_) => cmd_pmf(&config).map(|s| (exit::OK, s)),
        Command::Pgf(_) => cmd_pgf(&config).map(|s| (exit::OK, s)),
        Command::Survival(_) => cmd_survival(&config).map(|s| (exit::OK, s)),
        Command::Verify(_) => {
            cmd_verify(&config).map(|(s, pass)| (if pass { exit::OK } else { exit::VERIFY_FAILED }, s))
        }
        Command::Simulate(_) => cmd_simulate(&config).map(|s| (exit::OK, s)),
    };
    match result {
        Ok((code, stdout)) => {
            let stderr = if code == exit::VERIFY_FAILED {
                "verification failed\n".to_string()
            } else {
                String::new()
            };
            Outcome { code, stdout, stderr }
        }
        Err(e) => Outcome::failure(exit_code(&e), format!("error: {e}\n")),
    }
}
