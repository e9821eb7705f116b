//! `tropline`: tropical segments between equidistant trees from the command line.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tropline::SeededStream;

#[derive(Parser, Debug)]
#[command(name = "tropline", version, about = "Tropical line segments between equidistant phylogenetic trees")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = SeededStream::DEFAULT_SEED)]
    pub seed: u64,

    /// Output file (a directory for `worst-case` and `random-pair`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Add rounded decimal copies of exact values.
    #[arg(long, global = true)]
    pub decimal: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the three- and four-point conditions of a vector or Newick file.
    Validate { path: PathBuf },
    /// Turning points of the tropical segment from U to V.
    Segment { u: PathBuf, v: PathBuf },
    /// Classify every turning point and cross-check the topology changes.
    Classify { u: PathBuf, v: PathBuf },
    /// Tropical NNI number, interchange number and (for n <= 7) NNI distance.
    Tnni { u: PathBuf, v: PathBuf },
    /// Write the caterpillar pair with a turning point for every leaf pair.
    WorstCase { n: usize },
    /// Planar tree counts by formula and by enumeration for n = 1..=NMAX.
    Count { nmax: usize },
    /// A reproducible random generic pair.
    RandomPair {
        n: usize,
        /// Heights are drawn from 1..=M (default n^6).
        #[arg(long)]
        height_range: Option<u64>,
    },
    /// Monte-Carlo mean number of turning points against the analytic bound.
    Experiment {
        #[arg(required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Heights are drawn from 1..=M (default n^6).
        #[arg(long)]
        height_range: Option<u64>,
    },
}

/// Exit statuses.
pub enum Failure {
    /// Input failed validation or could not be read.
    Invalid(String),
    /// Arguments were rejected.
    Usage(String),
    /// A turning point fell outside the trichotomy.
    Theorem(String),
}

impl From<tropline::Error> for Failure {
    fn from(e: tropline::Error) -> Self {
        match e {
            tropline::Error::TheoremViolation(_) => Failure::Theorem(e.to_string()),
            tropline::Error::InvalidArgument(_)
            | tropline::Error::TooManyLeaves { .. }
            | tropline::Error::TooFewLeaves { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Theorem(msg)) => {
            eprintln!("theorem violation: {msg}");
            ExitCode::from(3)
        }
    }
}
