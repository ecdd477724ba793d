//! Command-line front end for `ecp-core`.
//!
//! Data goes to `--out` when given, with a one-line summary on stdout;
//! otherwise the data goes to stdout and the summary to stderr.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, CommandKind, Flags, Format};
pub use config::{parse_config, RunConfig, DEFAULT_SEED};
pub use error::CliError;

/// Runs the command described by `cli`, writing its outputs.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let (kind, flags) = cli.command.split();
    let cfg = parse_config(kind, &flags)?;
    let out = commands::run(&cfg)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &out.data)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            println!("{}", out.summary);
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(&out.data).and_then(|_| stdout.flush()) {
                // a closed downstream pipe is not our failure
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(CliError::Io(format!("stdout: {e}")));
                }
                _ => {}
            }
            eprintln!("{}", out.summary);
        }
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
