use thiserror::Error;

use crate::series::Period;

/// Errors produced by the modelling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("no quotes for {0} (series must be contiguous)")]
    Gap(Period),

    #[error("dates must be strictly increasing (line {line})")]
    UnorderedDates { line: u64 },

    #[error("close must be positive and finite, got {value} (line {line})")]
    InvalidClose { line: u64, value: f64 },

    #[error("series contains a non-finite value at position {0}")]
    NonFinite(usize),

    #[error("series of length {len} is too short: {needed} points required")]
    TooShort { len: usize, needed: usize },

    #[error("expected {expected} leading values, got {got}")]
    HeadLength { expected: usize, got: usize },

    #[error("period {0} lies outside the series span")]
    OutOfSpan(Period),

    #[error("split at {0} leaves an empty side")]
    EmptySplit(Period),

    #[error("invalid model order: {0}")]
    InvalidOrder(String),

    #[error("parameter dimensions do not match order: {0}")]
    DimensionMismatch(String),

    #[error("parameters are not stationary/invertible")]
    NonStationary,

    #[error("not enough data: {n_effective} effective observations, {required} required")]
    InsufficientData { n_effective: usize, required: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: {0} actual vs {1} predicted")]
    LengthMismatch(usize, usize),

    #[error("actual value is zero at position {0}; percentage metrics undefined")]
    ZeroActual(usize),

    #[error("all {0} candidate fits failed")]
    AllFitsFailed(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    /// True for errors caused by the input data rather than by numerics or arguments.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySeries
                | Error::Gap(_)
                | Error::UnorderedDates { .. }
                | Error::InvalidClose { .. }
                | Error::NonFinite(_)
                | Error::TooShort { .. }
                | Error::InsufficientData { .. }
                | Error::ZeroActual(_)
                | Error::Parse { .. }
                | Error::Csv(_)
        )
    }

    /// True for failures of the estimation machinery.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonStationary | Error::AllFitsFailed(_) | Error::Numerical(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
