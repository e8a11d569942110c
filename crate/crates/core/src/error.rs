use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported digit range (p < 2^31)")]
    PrimeTooLarge(u64),

    #[error("mixed primes: {left} and {right}")]
    PrimeMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is singular at working precision (pivot column {column})")]
    Singular { column: usize },

    #[error("omega_{k} needs {required} digits of input precision, only {available} available")]
    InsufficientPrecision { k: usize, required: i64, available: i64 },

    #[error("value is not a p-adic integer (valuation {valuation})")]
    NotIntegral { valuation: i64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid precision policy: {0}")]
    InvalidPrecision(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("partition `{0}` has no records")]
    EmptyPartition(String),

    #[error("exact fit needs K = N - 1 (K = {degree}, N = {records})")]
    DegreeMismatch { degree: usize, records: usize },

    #[error("records {first} and {second} share an interleaved input but have different labels")]
    InconsistentSystem { first: usize, second: usize },

    #[error("lattice of {points} points exceeds the enumeration limit {limit}")]
    LatticeTooLarge { points: u128, limit: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
