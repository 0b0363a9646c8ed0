use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dimers_cli::args::Cli;
use dimers_cli::{exit_status, run, EXIT_CHECK_FAILED, EXIT_OK};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(outcome.stdout.as_bytes())
                .and_then(|()| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_CHECK_FAILED);
            }
            ExitCode::from(if outcome.success {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}
