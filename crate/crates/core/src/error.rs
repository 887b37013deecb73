//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by toolkit operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("factor index {index} out of range for {nfactors} factors")]
    InvalidFactor { index: usize, nfactors: usize },

    #[error("empty factor selection")]
    EmptyFactorSet,

    #[error("operator is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("operator lies outside the context span (residual {0:.3e})")]
    OutsideSpan(f64),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("contexts are not comparable: {0}")]
    IncomparableContexts(String),

    #[error("state is not certified positive over pure tensors: {0}")]
    NotCertified(String),

    #[error("value table is rank deficient; undetermined directions: {0}")]
    RankDeficient(String),

    #[error("value table is inconsistent (residual {0:.3e})")]
    InconsistentValues(f64),

    #[error("kernel chain mismatch: {0}")]
    ChainMismatch(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
