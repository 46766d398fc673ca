use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("pole at n = {at}")]
    Pole { at: BigRational },

    #[error("singular matrix (rank {rank})")]
    Singular { rank: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("pairings live on different sets (k = {left} vs k = {right})")]
    PairingSizeMismatch { left: usize, right: usize },

    #[error("multi-index has length {got}, expected {expected}")]
    IndexLength { expected: usize, got: usize },

    #[error("odd total degree {total}")]
    OddTotalDegree { total: u64 },

    #[error("pairing count too large: k = {k} exceeds the limit {limit}")]
    PairingCountTooLarge { k: usize, limit: usize },

    #[error(
        "k = {k} exceeds the symbolic limit {limit}; use numeric evaluation or raise WG_GUARD_K"
    )]
    SymbolicGuard { k: usize, limit: usize },

    #[error("bound hypothesis violated: n0 = {n0} must exceed K = {count}")]
    BoundHypothesis { n0: u64, count: u64 },

    #[error("no admissible pairings")]
    NoAdmissiblePairings,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
