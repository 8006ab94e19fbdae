//! Command-line front end for `hyperlen-core`: TOML job documents in,
//! fixed-format CSV/JSON out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Run;
pub use error::{CliError, CliResult};
pub use output::{fmt_num, Format};

#[derive(Debug, Parser)]
#[command(
    name = "hyperlen",
    version,
    about = "Hyperbolic lengths, spectra and deformations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML job document.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for the random conjugations tried before giving up on a certificate.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Hyperbolic length of a curve.
    Length,
    /// Shorten a closed curve in its free homotopy class.
    Shorten,
    /// Truncated length spectrum of a Schottky group.
    Spectrum,
    /// Trace a deformation family and compare its endpoint spectra.
    Deform,
    /// Ping-pong certificate for a Schottky group.
    Certify,
    /// Compare two truncated spectra.
    Compare,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let Some(config) = cli.config.clone() else {
        return Err(CliError::Config("--config <path> is required".into()));
    };
    let run = Run {
        config,
        out: cli.out.clone(),
        format: cli.format,
        seed: cli.seed,
    };
    match cli.command {
        Command::Length => commands::cmd_length(&run).map(drop),
        Command::Shorten => commands::cmd_shorten(&run).map(drop),
        Command::Spectrum => commands::cmd_spectrum(&run).map(drop),
        Command::Deform => commands::cmd_deform(&run).map(drop),
        Command::Certify => commands::cmd_certify(&run).map(drop),
        Command::Compare => commands::cmd_compare(&run).map(drop),
    }
}
