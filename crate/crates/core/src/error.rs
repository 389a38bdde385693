use thiserror::Error;

/// Kind of failure found while checking a point of the form `alpha^(q^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    /// Some entry of `A` has a pole at the point.
    Pole,
    /// `A` is defined at the point but not invertible there.
    Singular,
}

impl std::fmt::Display for FailureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureKind::Pole => f.write_str("pole"),
            FailureKind::Singular => f.write_str("singular"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero input is not allowed here")]
    ZeroInput,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("rational function has a pole at the origin")]
    PoleAtOrigin,
    #[error("initial vector is ambiguous: ker(A(0) - I) has dimension {dim}; supply f0")]
    AmbiguousInitialVector { dim: usize },
    #[error("initial vector f0 does not satisfy (A(0) - I) f0 = 0")]
    InconsistentInitialVector,
    #[error("degree budget exceeded: {needed} > {budget}")]
    DegreeBudgetExceeded { needed: u64, budget: u64 },
    #[error("size budget exceeded: {needed} > {budget}")]
    SizeBudgetExceeded { needed: u64, budget: u64 },
    #[error("exact value at k = {k} would need about {bits} bits (budget {budget})")]
    BitBudgetExceeded { k: u32, bits: u64, budget: u64 },
    #[error("alpha = {0} is not a regular point: A is {1} at alpha^(q^{2})")]
    NotRegularAt(String, FailureKind, u32),
    #[error("alpha must satisfy 0 < |alpha| < 1, got {0}")]
    AlphaOutOfRange(String),
    #[error("kernel did not stabilize before reaching k = {max_k}")]
    StabilizationFailed { max_k: u32 },
    #[error("insufficient order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("system has no coefficient bound (C, rho)")]
    MissingCoeffBound,
    #[error("rho * |alpha| = {0} is not < 1")]
    RhoAlphaNotContracting(String),
    #[error("no lift found with coefficient degree <= {0}")]
    NoLiftAtDegree(usize),
    #[error("relation-module rank did not stabilize: {0}")]
    RankNotStabilized(String),
    #[error("auxiliary kernel is empty")]
    EmptyKernel,
    #[error("tau is not a verified value relation at alpha ({0})")]
    PreconditionTauNotARelation(String),
    #[error("rational reconstruction failed after {primes} primes")]
    ReconstructionFailed { primes: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name of the variant, for structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroInput => "ZeroInput",
            Error::Parse(_) => "Parse",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidSystem(_) => "InvalidSystem",
            Error::PoleAtOrigin => "PoleAtOrigin",
            Error::AmbiguousInitialVector { .. } => "AmbiguousInitialVector",
            Error::InconsistentInitialVector => "InconsistentInitialVector",
            Error::DegreeBudgetExceeded { .. } => "DegreeBudgetExceeded",
            Error::SizeBudgetExceeded { .. } => "SizeBudgetExceeded",
            Error::BitBudgetExceeded { .. } => "BitBudgetExceeded",
            Error::NotRegularAt(..) => "NotRegularAt",
            Error::AlphaOutOfRange(_) => "AlphaOutOfRange",
            Error::StabilizationFailed { .. } => "StabilizationFailed",
            Error::InsufficientOrder { .. } => "InsufficientOrder",
            Error::MissingCoeffBound => "MissingCoeffBound",
            Error::RhoAlphaNotContracting(_) => "RhoAlphaNotContracting",
            Error::NoLiftAtDegree(_) => "NoLiftAtDegree",
            Error::RankNotStabilized(_) => "RankNotStabilized",
            Error::EmptyKernel => "EmptyKernel",
            Error::PreconditionTauNotARelation(_) => "PreconditionTauNotARelation",
            Error::ReconstructionFailed { .. } => "ReconstructionFailed",
        }
    }

    /// True for outcomes that answer the question negatively rather than
    /// signalling bad input or exhausted resources.
    pub fn is_negative_result(&self) -> bool {
        matches!(self, Error::NotRegularAt(..) | Error::NoLiftAtDegree(_) | Error::PreconditionTauNotARelation(_))
    }
}
