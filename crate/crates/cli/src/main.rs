mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{CliError, EXIT_USAGE};
use config::{Command, RunConfig};

fn main() -> ExitCode {
    let mut cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    if matches!(cfg.command, Command::Simulate { .. }) && cfg.seed.is_none() {
        let seed = commands::fresh_seed();
        cfg.seed = Some(seed);
        eprintln!("seed: {seed}");
        eprintln!("reproduce with: groupwalk {}", cfg.to_args().join(" "));
    }
    match execute(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let body = commands::run(cfg)?;
    match &cfg.out {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}
