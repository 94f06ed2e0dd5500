use thiserror::Error;

use crate::configspace::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point label `{0}` is not a valid identifier")]
    InvalidLabel(String),
    #[error("point `{0}` is listed more than once")]
    DuplicatePoint(String),
    #[error("point `{0}` must have positive rank")]
    ZeroRank(String),
    #[error("point `{0}` must have positive weight")]
    NonPositiveWeight(String),
    #[error("basis index {index} out of range at `{point}` (rank {rank})")]
    BasisOutOfRange {
        point: String,
        index: usize,
        rank: usize,
    },
    #[error("elements live over different configurations {left} and {right}")]
    ConfigMismatch {
        left: Configuration,
        right: Configuration,
    },
    #[error("configurations {left} and {right} overlap")]
    OverlappingConfigurations {
        left: Configuration,
        right: Configuration,
    },
    #[error("kernel pairs point `{0}` with itself")]
    SamePoint(String),
    #[error("point `{0}` is repeated")]
    RepeatedPoint(String),
    #[error("configuration {config} exceeds the bound of {max} points")]
    TooManyPoints { config: Configuration, max: usize },
    #[error("field has no value at `{0}`")]
    MissingPoint(String),
    #[error("field value at `{point}` has length {len}, expected {rank}")]
    FieldLength {
        point: String,
        len: usize,
        rank: usize,
    },
    #[error("density values must be positive")]
    NonPositiveDensity,
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
