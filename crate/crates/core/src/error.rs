use thiserror::Error;

use crate::harness::ppm::PpmError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quadrature with {got} points is not exact here; at least {needed} required")]
    InsufficientQuadrature { needed: usize, got: usize },

    #[error("test interval [{lo}, {hi}] is not aligned with the {cells}-cell grid")]
    NotAligned { lo: f64, hi: f64, cells: usize },

    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Ppm(#[from] PpmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
