use std::process::ExitCode;

use clap::Parser;
use swapplanar::args::Cli;

fn main() -> ExitCode {
    match swapplanar::run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
