use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use fracpois::cli::{run, CONFIG_ENV};

fn main() -> ExitCode {
    let config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let outcome = run(std::env::args_os(), config.as_deref());
    // a closed pipe on stdout is not worth a panic
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
