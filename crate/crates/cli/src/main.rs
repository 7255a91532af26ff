//! `qlearn`: experiment runner writing deterministic CSV files.
//!
//! Exit status is 0 when every check of the run passed, 1 when the output was
//! written but a check failed, and 2 on usage or data errors.

mod commands;
mod config;

use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches};

use commands::{Cli, Outcome};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let args = match config::merge_config_file(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let command = Cli::command();
    let matches = match command.clone().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let sub_command = command
        .find_subcommand(name)
        .expect("parsed subcommand exists");
    let header = config::resolved_header(name, sub_command, sub);

    let start = Instant::now();
    let result = commands::run(cli, &header);
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(Outcome {
            path,
            rows,
            failures,
        }) => {
            eprintln!("wrote {rows} rows to {} in {elapsed:.3} s", path.display());
            if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in failures {
                    eprintln!("check failed: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
