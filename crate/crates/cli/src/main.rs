use std::process::ExitCode;

use clap::Parser;
use mco_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mco: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
