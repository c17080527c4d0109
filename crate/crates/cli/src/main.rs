use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::Format;

/// Gap-label experiments: label groups, spectra of Jacobi truncations, and
/// winding-rate estimates, driven by a TOML config.
#[derive(Parser, Debug)]
#[command(name = "gaplabel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the predicted label group and its certificate
    Group(Common),
    /// Emit the integrated density of states on an energy grid
    Ids(Common),
    /// Emit detected gaps with labels and membership verdicts
    Gaps(Common),
    /// Track gaps over the size schedule and flag contradictions
    Scan(Common),
    /// Check the solenoid conjugacy identities along random orbits
    SolenoidCheck(Common),
    /// Estimate the winding rate of the configured suspension observable
    Estimate(Common),
    /// Run every stage the config describes
    Run(Common),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Experiment config (TOML)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the seed of the first sample
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for artifacts; stdout when omitted
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Override the truncation size
    #[arg(long)]
    pub n: Option<usize>,
    /// Suppress the summary table
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Internal(String),
    #[error("contradiction: {0}")]
    Contradiction(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) => 2,
            CliError::Contradiction(_) => 3,
        }
    }
}

impl From<gaplabel::Error> for CliError {
    fn from(e: gaplabel::Error) -> Self {
        use gaplabel::Error as E;
        match e {
            E::EmptyMatrix
            | E::DimensionMismatch(_)
            | E::NotUnimodular(_)
            | E::InvalidSystem(_)
            | E::InvalidPoint(_)
            | E::NotInvertible(_)
            | E::InvalidObservable(_)
            | E::PhaseJump { .. }
            | E::InsufficientHistory { .. }
            | E::InvalidParameter(_) => CliError::Config(e.to_string()),
            E::Overflow(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Group(c) => commands::group(&c),
        Command::Ids(c) => commands::ids(&c),
        Command::Gaps(c) => commands::gaps(&c),
        Command::Scan(c) => commands::scan(&c),
        Command::SolenoidCheck(c) => commands::solenoid_check(&c),
        Command::Estimate(c) => commands::estimate(&c),
        Command::Run(c) => commands::run(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gaplabel: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
