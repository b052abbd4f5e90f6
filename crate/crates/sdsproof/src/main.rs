use std::process::ExitCode;

use clap::Parser;
use sdsproof::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((outcome, report)) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("sdsproof: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
