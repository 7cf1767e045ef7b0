use std::fmt;

use num_bigint::BigInt;

/// Errors raised by the exact-arithmetic kernels and solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Modulus below 2 passed to a residue operation.
    InvalidModulus(BigInt),
    /// Reduction or solver parameters outside their admissible range.
    InvalidParams(String),
    /// Rows are linearly dependent; `row` is the first offending index.
    RankDeficient { row: usize },
    /// Square matrix with no rational inverse.
    SingularMatrix,
    /// Vector or matrix dimensions do not line up.
    DimensionMismatch { expected: usize, found: usize },
    /// A lattice vector could not be decoded back to a multiplier.
    DecodeFailure { coord: usize },
    /// A documented precondition was violated by the caller.
    Precondition(String),
    /// Query against a tester whose certificate did not validate.
    UnusableTester,
    /// Input size exceeds what the operation is rated for.
    CapacityExceeded { n: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModulus(b) => write!(f, "invalid modulus {b}: must be at least 2"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::RankDeficient { row } => {
                write!(f, "rank deficiency: row {row} depends on earlier rows")
            }
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DecodeFailure { coord } => {
                write!(f, "multiplier decode failure at coordinate {coord}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::UnusableTester => write!(f, "tester certificate failed; queries disallowed"),
            Error::CapacityExceeded { n, max } => {
                write!(f, "input size {n} exceeds supported maximum {max}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
