//! Command-line front end: parameter scans over ε, machine-readable
//! verification reports, and plot-data emission for the confluence family
//! x(x−ε)w″ + {1−ε+(a+b+1)x}w′ + ab·w = 0.

mod commands;
mod config;
mod rng;
mod verify;

use clap::error::ErrorKind;
use clap::Parser;
use config::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
