use thiserror::Error;

use crate::signature::Signature;

/// Row or column side of a matrix-unit index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Col,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Col => f.write_str("column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    /// `position` is the 1-based tensor slot, `index` the 1-based offending value.
    #[error("{axis} index {index} at factor position {position} exceeds dimension {dim}")]
    IndexOutOfRange {
        axis: Axis,
        position: usize,
        index: usize,
        dim: usize,
    },

    #[error("malformed matrix-unit index: {0}")]
    MalformedIndex(String),

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("signature {sig} is not the entrywise product of {a} and {b}")]
    NotFactorizable {
        sig: Signature,
        a: Signature,
        b: Signature,
    },

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("dense dimension {dim} exceeds the guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("invalid density factor: {0}")]
    InvalidDensity(String),

    #[error("inconsistent construction: {0}")]
    Consistency(String),

    #[error("invalid atom label: {0}")]
    InvalidLabel(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSignature(_) => "invalid_signature",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::MalformedIndex(_) => "malformed_index",
            Error::SignatureMismatch { .. } => "signature_mismatch",
            Error::NotFactorizable { .. } => "not_factorizable",
            Error::LevelMismatch { .. } => "level_mismatch",
            Error::DimensionGuard { .. } => "resource_guard",
            Error::InvalidDensity(_) => "invalid_density",
            Error::Consistency(_) => "consistency",
            Error::InvalidLabel(_) => "invalid_label",
            Error::Parse { .. } => "parse_error",
            Error::InvalidInput(_) => "invalid_input",
            Error::Io(_) => "io_error",
            Error::Json(_) => "json_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
