//! `kakeya-lab`: command line front end.

mod args;
mod commands;
mod config;

use args::Cli;
use clap::error::ErrorKind;
use clap::Parser;
use kakeya_core::LabError;
use std::process::ExitCode;

const EXIT_ERROR: u8 = 1;
const EXIT_CONSTRAINT: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Caps the worker pool from `KAKEYA_LAB_THREADS`.
fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("KAKEYA_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("KAKEYA_LAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let g = commands::Globals { seed: cli.seed, grid: cli.grid, out: cli.out };
    match commands::dispatch(cli.command, g) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let LabError::ConstraintViolation { pairs, .. } = &e {
                for (i, j) in pairs.iter().take(20) {
                    eprintln!("  overlapping translates: {i} {j}");
                }
                ExitCode::from(EXIT_CONSTRAINT)
            } else {
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}
