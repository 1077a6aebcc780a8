use std::process::ExitCode;

use clap::Parser;
use weylkit::cli::{run, write_atomic, Cli, RunConfig};

fn main() -> ExitCode {
    let cfg: RunConfig = Cli::parse().into();
    let outcome = run(&cfg);
    if let Some(msg) = &outcome.message {
        eprintln!("weylkit: {msg}");
    }
    if let Some(report) = &outcome.report {
        match &cfg.output {
            Some(path) => {
                if let Err(e) = write_atomic(path, report) {
                    eprintln!("weylkit: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{report}"),
        }
    }
    ExitCode::from(outcome.code as u8)
}
