use thiserror::Error;

use crate::topology::Node;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid traffic distribution: {0}")]
    InvalidTraffic(String),

    #[error("no path from node {from} to node {to}")]
    NoPath { from: Node, to: Node },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("path index {index} out of range for K = {k}")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("improper coloring: vertices {0} and {1} are adjacent and share a color")]
    ImproperColoring(usize, usize),

    #[error("assignment covers {actual} vertices, graph has {expected}")]
    CoverageMismatch { expected: usize, actual: usize },

    #[error("instance too large: {size} vertices exceeds the limit of {limit}")]
    InstanceTooLarge { size: usize, limit: usize },

    #[error("no assignment fits within the spectrum cap of {cap} slices")]
    CapExceeded { cap: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    /// A broken internal invariant. Indicates a bug rather than bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
