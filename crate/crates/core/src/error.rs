use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("invalid motion limits: {0}")]
    InvalidLimits(String),

    #[error("plant state became non-finite at sample {sample}; gains may be unstable or substeps too coarse")]
    NonFiniteState { sample: usize },

    #[error("trace has {len} samples, at least {required} are needed to build one regressor")]
    TraceTooShort { len: usize, required: usize },

    #[error("regressor Gram matrix is singular (det = {det:e}); the data does not excite acceleration and velocity independently")]
    RankDeficient { det: f64 },

    #[error("training loss diverged at epoch {epoch}")]
    DivergedLoss { epoch: usize },

    #[error("reference lookahead of {requested} samples exceeds the profile's {available}")]
    LookaheadUnavailable { requested: usize, available: usize },

    #[error("cannot compute an error metric over an empty trace")]
    EmptyTrace,

    #[error("length mismatch: {what} ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("config: {0}")]
    Config(String),

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics (divergence, rank deficiency) as
    /// opposed to bad input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteState { .. } | Error::RankDeficient { .. } | Error::DivergedLoss { .. }
        )
    }
}
