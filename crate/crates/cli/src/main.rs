//! `selfsim-ot` command-line tool.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or validation errors.

use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod output;

fn main() -> ExitCode {
    let cli = config::Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
