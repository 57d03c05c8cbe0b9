use std::process::ExitCode;

use clap::Parser;
use icr_lab::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let result =
        RunConfig::from_cli(Cli::parse()).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
