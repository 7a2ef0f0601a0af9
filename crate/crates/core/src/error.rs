use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("norm {norm} deviates from 1 by more than {tolerance:e}")]
    NormOutOfTolerance { norm: f64, tolerance: f64 },
    #[error("{requested} qubits exceed the budget of {budget}")]
    SizeOverflow { requested: usize, budget: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("bad register layout: {0}")]
    BadLayout(String),
    #[error("register mismatch: {0}")]
    RegisterMismatch(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("budget exceeded: {what} needs {count}, budget is {budget}")]
    BudgetExceeded { what: &'static str, count: u128, budget: u128 },
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("majority vote needs an odd copy count, got {0}")]
    EvenT(usize),
    #[error("fragment node {node:?} is numerically singular (smallest singular value {sigma:e})")]
    NonInvertibleNode { node: String, sigma: f64 },
    #[error("malformed fragment header: {0}")]
    MalformedHeader(String),
    #[error("fragment payload has {actual} bytes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("malformed fragment payload: {0}")]
    MalformedPayload(String),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("invalid thresholds a={a}, b={b}")]
    InvalidThresholds { a: f64, b: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("problems live over different ground sizes ({left} vs {right})")]
    GroundMismatch { left: usize, right: usize },
    #[error("accept and reject sets overlap")]
    OverlappingSets,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("io failure: {0}")]
    IoFailure(String),
    #[error("parse failure: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
