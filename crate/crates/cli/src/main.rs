//! `pcf`: batch experiments on the family z^d + c.
//!
//! Exit status 0 on success, 1 for domain errors (reported on standard error
//! as JSON `{error, detail}`), 2 for usage errors.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli).and_then(|artifact| output::emit(&cli, &artifact)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({"error": e.kind(), "detail": e.to_string()}));
            ExitCode::from(e.exit_code())
        }
    }
}
