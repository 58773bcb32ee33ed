use thiserror::Error;

/// Domain errors. Variant names are stable and surface verbatim in CLI output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("OrderCapExceeded: enumeration passed the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },

    #[error("NotAGroup: {0}")]
    NotAGroup(String),

    #[error("UnknownElement: {0} is not in the carrier")]
    UnknownElement(String),

    #[error("GroupMismatch: operands belong to different groups")]
    GroupMismatch,

    #[error("DimensionMismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("NotIdempotent: matrix does not satisfy E*E = E")]
    NotIdempotent,

    #[error("TruncationMismatch: operands live on different truncation sets")]
    TruncationMismatch,

    #[error("IntegralityViolation: {0}")]
    IntegralityViolation(String),

    #[error("NotASubset: target truncation set is not contained in the source")]
    NotASubset,

    #[error("IndexNotInTruncation: index {index} is not in the truncation set")]
    IndexNotInTruncation { index: u64 },

    #[error("EmptyTruncation: the quotient set S/{s} is empty")]
    EmptyTruncation { s: u64 },

    #[error("NotDivisorClosed: {n} is in the set but its divisor {d} is not")]
    NotDivisorClosed { n: u64, d: u64 },

    #[error("TruncationCapExceeded: {0}")]
    TruncationCapExceeded(String),

    #[error("LevelCapExceeded: level {0} exceeds the supported range")]
    LevelCapExceeded(u64),

    #[error("LevelMismatch: operand levels {left} and {right} differ")]
    LevelMismatch { left: u64, right: u64 },

    #[error("NotADivisor: {s} does not divide {r}")]
    NotADivisor { s: u64, r: u64 },

    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),

    #[error("LevelNotCovered: the truncation set does not contain every divisor of {r}")]
    LevelNotCovered { r: u64 },

    #[error("SupportNotDeclared: the element does not declare full support")]
    SupportNotDeclared,

    #[error("TruncationTooSmall: no level survives division by {s}")]
    TruncationTooSmall { s: u64 },

    #[error("NotInSL2: determinant is {0}, expected 1")]
    NotInSL2(String),

    #[error("ZeroArgument: the argument must be nonzero")]
    ZeroArgument,

    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
