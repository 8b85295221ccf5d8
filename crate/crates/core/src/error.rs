use thiserror::Error;

use crate::regex::RegexError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },
    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Regex(#[from] RegexError),
    #[error("normalizer did not converge within bound {bound}")]
    NormalizerDiverged { bound: i64 },
    #[error("unsupported normalizer offset {0} (|offset| must be at most 2)")]
    OffsetOutOfRange(i64),
    #[error("no representation of {0} in this system")]
    NoRepresentation(i64),
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
