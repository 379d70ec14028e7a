//! `qotp`: trade-off tables, dominance checks, product-scheme bounds and
//! small-bias set tooling for approximate quantum encryption.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use output::Format;

pub const DEFAULT_SEED: u64 = 20060101;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qotp_core::Error),
    #[error("{0}")]
    Verification(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("could not format output: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use qotp_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::SearchFailure { .. }) | CliError::Verification(_) => 4,
            CliError::Core(_) => 3,
            CliError::Io(..) | CliError::Output(_) => 5,
        }
    }
}

/// Exit codes: 0 success, 2 usage, 3 domain/resource/parse, 4 search or
/// verification failure, 5 I/O.
#[derive(Debug, Parser)]
#[command(name = "qotp", version, about, long_about = None)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Seed for every random choice (default 20060101)
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest qubit count for dense simulation
    #[arg(long, global = true, env = "QOTP_MAX_QUBITS", default_value_t = 8,
          value_parser = clap::value_parser!(u32).range(1..=qotp_core::linalg::MAX_QUBITS as i64))]
    max_qubits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal entropy over a grid of ε, with the regime-change marker rows
    Tradeoff {
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.5)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Optimal Pauli distribution for a given ε or entropy
    #[command(group(ArgGroup::new("target").required(true).args(["epsilon", "entropy"])))]
    Optimal {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        entropy: Option<f64>,
    },
    /// The ε where the optimal distribution changes shape discontinuously
    Critical,
    /// Compare general mixed-unitary schemes with their dominating Pauli schemes
    #[command(group(ArgGroup::new("source").required(true).args(["file", "random"])))]
    VerifyDominance {
        /// JSON scheme file: one object or an array of {weights, unitaries}
        file: Option<PathBuf>,
        /// Number of seeded random schemes with 2 to 6 unitaries
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        random: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Worst-case deviations of n identical single-qubit schemes
    Nqubit {
        /// Per-qubit shrink factor: output eigenvalues (1 ± ε)/2, ε in [0, 1]
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
        n: u64,
        /// Also sample this many random pure states (n must be within the qubit cap)
        #[arg(long)]
        check_samples: Option<usize>,
    },
    /// Bias of a bit-string set read from a file or found by random search
    #[command(group(ArgGroup::new("source").required(true).args(["file", "k"])))]
    Bias {
        /// One bit string per line, '#' starts a comment
        file: Option<PathBuf>,
        /// String length for search
        #[arg(long, requires_all = ["size", "delta"])]
        k: Option<usize>,
        /// Set size for search
        #[arg(long)]
        size: Option<usize>,
        /// Bias target for search
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 100)]
        max_tries: usize,
        /// Improve each sample by local swaps before giving up on it
        #[arg(long)]
        refine: bool,
        /// Also pad with ceil(δN) all-zero strings and report the padded set
        #[arg(long)]
        pad: Option<f64>,
        /// Write the searched set here in the file format
        #[arg(long)]
        save_set: Option<PathBuf>,
    },
    /// Small-bias set of size n·2^n padded to break operator-norm security
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qotp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
