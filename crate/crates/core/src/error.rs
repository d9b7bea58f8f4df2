//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field size {0} exceeds the configured cap {1}")]
    FieldTooLarge(u128, u64),
    #[error("operands belong to different fields")]
    MismatchedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero element has no multiplicative order")]
    ZeroElement,
    #[error("no {0}-th root of unity: {0} does not divide {1}")]
    NoSuchRoot(u64, u64),
    #[error("code length {0} is not coprime to field size {1}")]
    NonCoprimeLength(u32, u64),
    #[error("defining-set exponent {0} outside [0, {1})")]
    InvalidExponent(u32, u32),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("abstraction set has {0} vectors, above the cap {1}")]
    AbstractionTooLarge(u128, u64),
    #[error("column {col} is not a singleton at row {row}")]
    NotASingleton { col: u32, row: u32 },
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("solution search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("defining-set containment violated: exponent {0} missing")]
    ContainmentViolated(u32),
    #[error("divisibility constraint violated: {0}")]
    DivisibilityViolated(String),
    #[error("gcd({0}, {1}) != 1")]
    GcdViolated(u64, u64),
    #[error("repair-group size violated: {0} does not divide {1}")]
    GroupSizeViolated(u32, u32),
    #[error("locality not verified: {0}")]
    LocalityUnverified(String),
    #[error("information-set sampling kept hitting singular sets")]
    SingularInformationSet,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix too large for the search engine: {0} (max 64)")]
    MatrixTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
