use num_bigint::BigUint;
use thiserror::Error;

use crate::exact::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("not positive definite: leading principal minor of order {order} is {value}")]
    Definiteness { order: usize, value: Rat },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not factor {0} (rho budget exhausted)")]
    Unfactored(BigUint),

    #[error("rank error: {0}")]
    Rank(String),

    /// An internal consistency check failed. This points at a bug in the
    /// implementation, never at bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("search budget of {nodes} nodes exhausted")]
    Budget { nodes: u64 },

    #[error("rank {rank} exceeds the configured cap {cap}")]
    RankCap { rank: usize, cap: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown catalog entry `{name}`; available: {available}")]
    UnknownCatalog { name: String, available: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Whether the error means "ran out of budget" rather than "wrong".
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::RankCap { .. })
    }
}
