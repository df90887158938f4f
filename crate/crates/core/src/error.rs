use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("system is not mixing: {0}")]
    NonPrimitive(String),
    #[error("bad beta expansion: {0}")]
    BadBetaExpansion(String),
    #[error("operation not supported for this system: {0}")]
    UnsupportedSystem(&'static str),
    #[error("word of length {len} exceeds the supported depth {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("word of length {len} is shorter than the required {min}")]
    WordTooShort { len: usize, min: usize },
    #[error("word is not admissible at position {0}")]
    InadmissibleWord(usize),
    #[error("bad checkpoints: {0}")]
    BadCheckpoints(String),
    #[error("depth mismatch: {0}")]
    DepthMismatch(String),
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("lattice window contains no admissible Birkhoff sum")]
    DegenerateWindow,
    #[error("exhaustive search too large: {0}")]
    ExhaustiveTooLarge(String),
    #[error("horizon too short: {0}")]
    HorizonTooShort(String),
    #[error("no sign change of the root equation on [{lo}, {hi}]")]
    BisectionBracketFailure { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::BisectionBracketFailure { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
