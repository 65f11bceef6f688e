//! `freelsd` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical
//! failure (with a JSON diagnostic on stderr).

mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

/// Why a run stopped early.
pub enum Failure {
    Usage(String),
    Validation(String),
    Numeric(freelsd::Error),
}

impl From<freelsd::Error> for Failure {
    fn from(e: freelsd::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot set up {threads} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("example: freelsd lsd --c 0.5 --alpha 1 --beta 0.5 --r 0.5 --out lsd.csv");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            eprintln!("{}", e.diagnostic());
            ExitCode::from(3)
        }
    }
}
