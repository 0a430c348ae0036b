use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("cannot reduce dyadic mod 2")]
    DyadicMod2,
    #[error("content of a dyadic coefficient is undefined")]
    DyadicContent,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("substitution requires augmentation-zero argument")]
    NonzeroConstantTerm,
    #[error("degree {degree} is beyond truncation {trunc}")]
    BeyondTruncation { degree: usize, trunc: usize },
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("not a formal group law: {0}")]
    AxiomViolation(String),

    #[error("rank {rank} is not allowed for type {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("not a weight: {0:?}")]
    NotAWeight(Vec<i64>),
    #[error("invalid Weyl group element: {0}")]
    InvalidWeylElement(String),

    #[error("Θ_n/2^n test is type-D only")]
    TypeDOnly,
    #[error("specialize parameters first")]
    ParametersNotSpecialized,
    #[error("Θ_{index}/{divisor} is not integral")]
    NonIntegralTheta { index: usize, divisor: u64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not contained in the ambient lattice")]
    NotContained,
    #[error("invariant dimension certificate failed at truncation {trunc}: {found} Θ-products vs bound {bound}")]
    Certificate { trunc: usize, found: usize, bound: usize },

    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
