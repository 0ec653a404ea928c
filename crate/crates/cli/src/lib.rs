//! Library side of the `fvpg` command-line tool.
//!
//! Every subcommand writes its table as CSV (header row, 17 significant
//! digits) plus a `<stem>.json` metadata sidecar into `--out-dir`
//! (default `$FVPG_OUT_DIR`, else the working directory), and prints the
//! table on stdout.
//!
//! Exit codes: 0 on success, 1 on usage, parse or solver errors, 2 when a
//! requested check (`--assert-*`, `--compare`, `psi-check` conditions) fails.

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod psi;

pub use args::{Cli, Command, OUT_DIR_ENV};
pub use error::CliError;

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let mut sink = output::Sink::new(&cli.out_dir)?;
    match &cli.command {
        Command::PsiCheck(a) => commands::psi_check(a, &mut sink),
        Command::Solve(a) => commands::solve(a, &mut sink),
        Command::Converge(a) => commands::converge(a, &mut sink),
        Command::Infsup(a) => commands::infsup(a, &mut sink),
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("fvpg: {e}");
            e.exit_code()
        }
    }
}
