use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected} values, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("value {value} is not in the domain of variable {var}")]
    ValueOutOfDomain { var: usize, value: i64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),

    #[error("search space of {size} assignments exceeds the limit of {limit}; pass an explicit cap")]
    SpaceTooLarge { size: String, limit: u128 },

    #[error("more than {cap} {what}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("rank {rank} out of range for a space of {size} assignments")]
    RankOutOfRange { rank: u128, size: u128 },

    #[error("assignment space too large for 128-bit ranks")]
    RankOverflow,

    #[error("unsupported ordering: {0}")]
    UnsupportedOrdering(String),

    #[error("matrix shape required")]
    MissingShape,

    #[error("cannot combine literal-level and assignment-level symmetries")]
    MixedRepresentations,

    #[error("generator maps solution {0} outside the solution set")]
    EscapesSolutionSet(String),

    #[error("invalid domain store: {0}")]
    InvalidStore(String),

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a size limit rather than bad input.
    pub fn is_overflow(&self) -> bool {
        matches!(
            self,
            Error::SpaceTooLarge { .. }
                | Error::CapExceeded { .. }
                | Error::RankOverflow
                | Error::SizeBound(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
