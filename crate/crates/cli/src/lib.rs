//! Library side of the `parloc` command-line tool.
//!
//! [`run_cli`] parses arguments, dispatches to a command and maps the
//! outcome to an exit status, writing only to the streams it is given.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod golden;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
pub use error::{CliError, EXIT_INVALID, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

/// Runs one command and returns its exit status.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => commands::run(a, out),
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::List(a) => commands::list(a, out),
        Command::Plotdat(a) => commands::plotdat(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
