use std::process::ExitCode;

use clap::Parser;
use dqds::cli::{run, Cli, PROFILE_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let profile = std::env::var(PROFILE_ENV).ok();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, profile.as_deref(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
