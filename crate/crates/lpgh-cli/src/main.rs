use std::process::exit;

use clap::Parser;
use lpgh_cli::config::{Cli, Command};
use lpgh_cli::runs;
use lpgh_cli::verify;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; only real parse problems are
            // usage errors.
            let code = i32::from(e.use_stderr());
            let _ = e.print();
            exit(code);
        }
    };
    let result = match &cli.command {
        Command::Distortion(args) => runs::run_distortion(args),
        Command::Balance(args) => runs::run_balance(args),
        Command::Separation(args) => runs::run_separation(args),
        Command::Gh(args) => runs::run_gh(args),
        Command::Sample(args) => runs::run_sample(args),
        Command::Verify(args) => verify::run_verify(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message());
        exit(err.exit_code());
    }
}
