//! `genoq`: encode DNA sequences as quantum states and inspect the results.

mod commands;
mod input;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genoq_core::Error;

#[derive(Parser, Debug)]
#[command(name = "genoq", version, about = "Classical-to-quantum DNA encoders")]
pub struct Cli {
    /// Seed for sampling, shuffling and random inputs.
    #[arg(long, global = true, env = "GENQ_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest register to simulate (at most 28).
    #[arg(long, global = true, env = "GENQ_MAX_QUBITS")]
    pub max_qubits: Option<usize>,
    /// Output file (or directory for `encode` and `qoltz train`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a sequence (or image) with one scheme and dump the state.
    Encode(EncodeArgs),
    /// Sample measurement counts from a state dump.
    Sample {
        /// State dump JSON file.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
    },
    /// Huffman codebook of a sequence.
    Huffman {
        input: String,
        /// Greedy textbook merge instead of the rank-paired tree.
        #[arg(long)]
        classic: bool,
    },
    /// Burrows-Wheeler transform.
    Bwt { input: String },
    /// Inverse Burrows-Wheeler transform.
    Ibwt {
        /// Transformed string over ACGT$, or @file holding `bwt` JSON output.
        transformed: String,
        #[arg(long)]
        primary_index: Option<usize>,
    },
    /// Base distribution and Shannon entropy.
    Entropy { input: String },
    /// Divergence between the base distributions of two sequences.
    Divergence {
        #[arg(long, value_parser = ["kl", "js", "bhatt", "bhattacharyya", "hellinger", "tv", "wasserstein"])]
        kind: String,
        input: String,
        #[arg(long = "ref")]
        reference: String,
        /// Additive smoothing for KL.
        #[arg(long)]
        smooth: Option<f64>,
    },
    /// Split and class counts of a promoter table.
    Stats {
        /// CSV with id,region,start,end,strand[,sequence].
        #[arg(long)]
        table: PathBuf,
        /// CSV with id,split,class.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Energy-model harness.
    Qoltz {
        #[command(subcommand)]
        action: QoltzCommand,
    },
    /// Time encoders on random sequences.
    Bench {
        /// Comma-separated scheme names.
        #[arg(long, value_delimiter = ',', default_value = "huffman")]
        schemes: Vec<String>,
        /// Comma-separated ascending lengths.
        #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
    /// Check fast code paths against reference computations.
    Verify {
        /// Run one group: qft, dct, bwt, partition, gradient.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum QoltzCommand {
    /// Train an energy model on sequence segments.
    Train(TrainArgs),
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Sequences: FASTA via @file, or one literal.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    /// Segments per sequence.
    #[arg(long, default_value_t = 2)]
    pub segments: usize,
    #[arg(long, default_value_t = 16)]
    pub batch: usize,
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Amplitude,
    Pauli,
    Angle,
    Huffman,
    Qbwt,
    Cosine,
    Sencode,
    Nz22,
    Nz23,
    Quantig,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[arg(long, value_enum)]
    pub scheme: Scheme,
    /// Sequence literal or @file.
    #[arg(long)]
    pub input: Option<String>,
    /// Raw real vector for amplitude/pauli, comma separated.
    #[arg(long)]
    pub values: Option<String>,
    /// PGM image for the cosine scheme.
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Reference sequence for nz22, nz23, quantig.
    #[arg(long = "ref")]
    pub reference: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value = "fisher-rao")]
    pub metric: String,
    #[arg(long)]
    pub smooth: Option<f64>,
    /// Measurement shots; qbwt samples 1024 by default.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Pauli map interaction order.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub reps: usize,
    /// CNOT chain after the angle embedding.
    #[arg(long)]
    pub entangle: bool,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// Bad flag combination or argument.
    Usage(String),
    /// At least one verification check failed.
    Verification(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Verification(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Core(Error::QubitCapExceeded { .. } | Error::TooManySpins { .. }) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
