use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Variants named `*Failure` signal that an exact check disagreed with a
/// proven statement. They are never expected in practice and callers should
/// surface them loudly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid rank {rank} for type {letter}")]
    InvalidRank { letter: char, rank: usize },
    #[error("unsupported root system: {0}")]
    Unsupported(String),
    #[error("unknown simple root index {0}")]
    UnknownRoot(usize),
    #[error("sum of positive roots is not proportional to the dual weight of root {0}")]
    NotProportional(usize),
    #[error("subset violation: {0}")]
    SubsetViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("root system is not irreducible")]
    NotIrreducible,
    #[error("infeasible selection at level {level}: {reason}")]
    InfeasibleSelection { level: usize, reason: String },
    #[error("divergence failure for root {root}: {series}")]
    DivergenceFailure { root: usize, series: String },
    #[error("branch mismatch at induction depth {depth}: {reason}")]
    BranchMismatch { depth: usize, reason: String },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
