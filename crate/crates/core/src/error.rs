use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyregError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("the polyhedral set is empty")]
    EmptySet,

    #[error("point is not in the set")]
    NotInSet,

    #[error("malformed complementarity relation: {0}")]
    MalformedRelation(String),

    #[error("complementarity relation is singular at face {0:?}")]
    SingularRelation(Vec<usize>),

    #[error("solution set at z is not a single point ({count} solutions found)")]
    NonUnique { count: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PolyregError>;
