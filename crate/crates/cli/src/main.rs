//! `mch-ist`: scattering, evolution, reconstruction and oracle comparison
//! for the modified Camassa-Holm equation on a unit background.
//!
//! Exit codes: 0 when every stage validation passes, 1 when a stage ran but
//! a validation failed, 2 for unparsable input or configuration, 3 for I/O
//! errors and 4 for numerical failures.

mod commands;
mod config;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "mch-ist", version, about = "Inverse scattering pipeline for the mCH equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Potential -> scattering data record and report.
    Scatter,
    /// Scattering data at t = 0 -> records at each of --times.
    Evolve,
    /// Scattering data -> reconstructed profile at the record's time.
    Invert,
    /// Potential -> scatter -> reconstruct at t = 0, with the error table.
    Roundtrip,
    /// Potential -> IST and PDE solutions at each of --times, with the error table.
    PdeCompare,
    /// Invariant report for a potential, scattering record or profile.
    Validate,
}

#[derive(Debug)]
pub enum CliError {
    Core(mch_core::Error),
    Config(String),
}

impl From<mch_core::Error> for CliError {
    fn from(e: mch_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Config(msg) => write!(f, "configuration: {msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mch_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e.root() {
                E::Parse { .. } | E::Corrupt(_) | E::Version(_) => 2,
                E::Io(_) => 3,
                _ => 4,
            },
        }
    }
}

/// Whether every validation of a completed run passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MCH_IST_LOG", "warn")).init();
    let result = RunConfig::resolve(&cli.overrides).and_then(|cfg| {
        if let Some(w) = cfg.workers {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build_global()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        commands::run(cli.command, &cfg)
    });
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => {
            eprintln!("validation failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
