//! `qlevels`: validate scenes, evaluate their distance fields, extract and
//! sweep level sets, and run the verification suites.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::{Common, InputError, RunConfig};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qlevels", version, about = "Level-set topology of signed distance fields over planar scenes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check a scene's geometry and signs
    Validate,
    /// Print f at each --point
    Eval,
    /// Write the level set at --t as CSV and SVG
    Extract,
    /// Sweep levels, bracket the exceptional ones, check the structure clauses
    Sweep,
    /// Run every check that applies to the scene
    Verify,
    /// Figure counts, exceptional sets and the zigzag certificates
    PaperChecks,
}

/// Why a command did not pass.
pub enum Failure {
    Input(String),
    Check(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e.0)
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let cfg = RunConfig::resolve(&cli.common)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Validate => commands::validate(&cfg),
        Command::Eval => commands::eval(&cfg),
        Command::Extract => commands::extract(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::PaperChecks => commands::paper_checks(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
