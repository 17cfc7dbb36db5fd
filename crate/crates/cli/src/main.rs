use std::io::ErrorKind;
use std::process::ExitCode;

use clap::Parser;
use singosc_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    match run(Cli::parse(), &mut stdout.lock()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        // reader went away (e.g. `| head`): not an error of ours
        Err(CliError::Io { source, .. }) if source.kind() == ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
