//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented range.
    InvalidArgument(String),
    /// Row/column/length counts do not line up, or the input is empty.
    DataShape(String),
    /// A variable or node name is not present.
    UnknownName(String),
    /// A categorical cell holds a token that is not a declared level.
    InvalidLevel {
        row: usize,
        column: String,
        token: String,
    },
    /// A value is outside the domain of a transform (e.g. Box-Cox needs y > 0).
    DomainViolation { row: usize, detail: String },
    /// An operation received a variable of the wrong kind.
    KindMismatch(String),
    /// The data admit no test: degenerate table, zero variance, exhausted sample.
    Untestable(String),
    /// A matrix that must be invertible or positive definite is not.
    Singular(String),
    /// Structural rule violation: self loop, duplicate edge, node-set mismatch.
    GraphStructure(String),
    /// An edge insertion or orientation would create a directed cycle.
    Cycle(String),
    /// The requested v-structures demand both a→c and c→a.
    ContradictoryColliders(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::DataShape(s) => write!(f, "data shape: {s}"),
            Error::UnknownName(s) => write!(f, "unknown name: {s}"),
            Error::InvalidLevel { row, column, token } => {
                write!(f, "invalid level {token:?} in column {column:?} at row {row}")
            }
            Error::DomainViolation { row, detail } => {
                write!(f, "domain violation at row {row}: {detail}")
            }
            Error::KindMismatch(s) => write!(f, "kind mismatch: {s}"),
            Error::Untestable(s) => write!(f, "untestable: {s}"),
            Error::Singular(s) => write!(f, "singular: {s}"),
            Error::GraphStructure(s) => write!(f, "graph structure: {s}"),
            Error::Cycle(s) => write!(f, "cycle: {s}"),
            Error::ContradictoryColliders(s) => write!(f, "contradictory colliders: {s}"),
        }
    }
}

impl core::error::Error for Error {}
