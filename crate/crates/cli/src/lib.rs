//! Command-line driver: configuration, subcommands and CSV output.

pub mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::{Mode, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not converged: {0}")]
    NonConvergence(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Config(_) | CliError::Domain(_) | CliError::Io(_) => 2,
            CliError::NonConvergence(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "blowfly-waves", version, about = "Traveling fronts of the diffusive Nicholson blowflies equation")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// κ-table integrand; overrides `kappa_mode` in the config.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Only errors on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Quadratic and continued characteristic roots, strip counts, axis clearance.
    Roots,
    /// Green's kernel table and its decay envelope.
    Kernel,
    /// Quasi upper and lower profiles with their residuals.
    Quasi,
    /// Monotone iteration from the quasi upper profile.
    Iterate,
    /// Composite Simpson table of the contour-shifted integral.
    SimpsonTable,
    /// Every check end to end; exit 1 if any fails.
    Verify,
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(mode) = cli.mode {
        cfg.kappa_mode = mode;
    }
    cfg.check_controls()?;
    let ctx = commands::Context::new(cfg, cli.quiet)?;
    match cli.command {
        Command::Roots => commands::roots(&ctx),
        Command::Kernel => commands::kernel(&ctx),
        Command::Quasi => commands::quasi(&ctx),
        Command::Iterate => commands::iterate(&ctx),
        Command::SimpsonTable => commands::simpson_table(&ctx),
        Command::Verify => commands::verify(&ctx),
    }
}
