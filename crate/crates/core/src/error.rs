use num_rational::BigRational;
use thiserror::Error;

use crate::rational::format_rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    Dimension { dim: u32, reason: &'static str },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at entry {index}: {reason}")]
    Validation { index: usize, reason: String },

    #[error("validation error: {0}")]
    InvalidFactor(String),

    #[error("lambda must be positive, got {}", format_rational(.0))]
    NonPositiveLambda(BigRational),

    /// Bounds are kept in `"p/q"` form; the error is only ever reported.
    #[error("invalid window [{lo}, {hi}]: need 0 < lo < hi")]
    InvalidWindow { lo: String, hi: String },

    #[error("index {index} out of range for factor {factor} ({count} eigenvalues listed)")]
    IndexOutOfRange {
        factor: usize,
        index: usize,
        count: usize,
    },

    #[error("branch (0,0) is the constant mode and is not part of the Jacobi spectrum")]
    ConstantBranch,

    #[error(
        "pair degenerate: equalities hold in both defining inequalities, \
         so the Jacobi operator is degenerate for all lambda"
    )]
    DegeneratePair,

    #[error(
        "insufficient truncation: factor {factor} lists {provided} eigenvalues but eigenvalues \
         up to at least {} are needed (at least {} entries)",
        format_rational(.needed_eigenvalue), .provided + 1
    )]
    InsufficientTruncation {
        factor: usize,
        provided: usize,
        /// Smallest value the last listed eigenvalue must reach.
        needed_eigenvalue: BigRational,
    },

    #[error("lambda = {} is a degeneracy instant; the Morse index is undefined there", format_rational(.0))]
    DegeneracyInstant(BigRational),

    #[error("factor {factor} has no volume data; the Yamabe obstruction needs both volumes")]
    MissingVolume { factor: usize },

    #[error("{0}")]
    Usage(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
