use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("instance must contain at least one weight")]
    EmptyInstance,

    #[error("sign vector has length {found}, instance has {expected} weights")]
    LengthMismatch { expected: usize, found: usize },

    #[error("sign at position {index} is {value}, expected +1 or -1")]
    InvalidSign { index: usize, value: i8 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid decimal magnitude {0:?}")]
    InvalidMagnitude(String),

    #[error("cardinality target {target} exceeds instance size {n}")]
    TargetTooLarge { target: u64, n: usize },

    #[error("cardinality target {target} has the wrong parity for n = {n}; |m| is always congruent to n mod 2")]
    TargetParity { target: u64, n: usize },

    #[error("exhaustive enumeration refused for n = {n} (limit {limit})")]
    TooLargeForOracle { n: usize, limit: usize },

    #[error("decision path of length {found} does not reach a terminal (needs {expected})")]
    PathNotTerminal { expected: usize, found: usize },

    #[error("no root above 1: {0}")]
    NoRoot(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("power-law fit needs {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
