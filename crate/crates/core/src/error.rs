use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV at row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("row {row}: cannot parse {value:?} as a number")]
    Parse { row: usize, value: String },

    #[error("column {0:?} not found")]
    ColumnNotFound(String),

    #[error("selected column contains no values")]
    EmptyColumn,

    #[error("invalid frame length {length}: {reason}")]
    FrameLength { length: usize, reason: String },

    #[error("frequency pair ({k1}, {k2}) is outside the principal domain for L = {frame_length}")]
    OutsideDomain {
        k1: i64,
        k2: i64,
        frame_length: usize,
    },

    #[error("degenerate spectrum at frequency index {frequency}")]
    DegenerateSpectrum { frequency: usize },

    #[error("degenerate long-run variance ({0:e})")]
    DegenerateVariance(f64),

    #[error("degenerate rolling window ending at index {index}")]
    DegenerateWindow { index: usize },

    #[error("autocovariance system is not invertible at order {order}")]
    NonInvertible { order: usize },

    #[error("unsupported significance level {0}; expected one of 0.10, 0.05, 0.025, 0.01")]
    UnsupportedAlpha(f64),

    #[error("{failures} of {total} replications failed ({breakdown})")]
    ReplicationFailures {
        failures: usize,
        total: usize,
        breakdown: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical degeneracy as opposed to bad input or configuration.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSpectrum { .. }
                | Error::DegenerateVariance(_)
                | Error::DegenerateWindow { .. }
                | Error::NonInvertible { .. }
                | Error::ReplicationFailures { .. }
        )
    }

    /// Short stable label, used for failure breakdowns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::TooShort { .. } => "too_short",
            Error::NonFinite { .. } => "non_finite",
            Error::Io { .. } => "io",
            Error::Csv { .. } => "csv",
            Error::Parse { .. } => "parse",
            Error::ColumnNotFound(_) => "column_not_found",
            Error::EmptyColumn => "empty_column",
            Error::FrameLength { .. } => "frame_length",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
            Error::DegenerateVariance(_) => "degenerate_variance",
            Error::DegenerateWindow { .. } => "degenerate_window",
            Error::NonInvertible { .. } => "non_invertible",
            Error::UnsupportedAlpha(_) => "unsupported_alpha",
            Error::ReplicationFailures { .. } => "replication_failures",
            Error::Json(_) => "json",
        }
    }
}
