use thiserror::Error;

/// Errors produced anywhere in the encoding pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} out of range for {n_qubits} qubit(s)")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("{requested} qubits requested but the cap is {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid gate targets: {0}")]
    BadTargets(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("empty sequence")]
    EmptySequence,

    #[error("invalid base '{ch}' at position {position}")]
    InvalidBase { ch: char, position: usize },

    #[error("unknown base map scheme '{0}'")]
    UnknownScheme(String),

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("divergence is infinite: {0}")]
    InfiniteDivergence(String),

    #[error("zero probability for base {0}; enable smoothing")]
    ZeroProbability(char),

    #[error("degenerate encoding: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed BWT input: {0}")]
    MalformedBwt(String),

    #[error("{n} spins exceed the enumeration bound of {max}")]
    TooManySpins { n: usize, max: usize },

    #[error("training diverged at step {step}: {detail}")]
    Diverged { step: usize, detail: String },

    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("FASTA error at line {line}: {message}")]
    Fasta { line: usize, message: String },

    #[error("image error: {0}")]
    Image(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("JSON error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
