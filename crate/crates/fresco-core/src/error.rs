use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrescoError {
    #[error("truncation guard exhausted: {0}")]
    GuardExhausted(String),
    #[error("rank is not stable at the certified truncation: {0}")]
    RankUnstable(String),
    #[error("operator is not homogeneous in (a,b)")]
    NotHomogeneous,
    #[error("operator is not monic in a")]
    NotMonic,
    #[error("unit factor has zero constant term")]
    NonUnitSeries,
    #[error("submodule is not normal")]
    NotNormal,
    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("operator has no kernel in the given ambient")]
    EmptyKernel,
    #[error("no normal rank-one submodule found: {0}")]
    SearchFailed(String),
    #[error("precondition fails: no suitable root")]
    NoRoot,
    #[error("search exhausted before the truncation bound")]
    SearchExhausted,
    #[error("no witness found within the search budget")]
    WitnessNotFound,
    #[error("module has no component in the requested exponent class")]
    NoAlphaPart,
    #[error("registry mismatch:\n{0}")]
    RegistryMismatch(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FrescoError>;
