use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge list is not a tree: {0}")]
    EdgeListNotATree(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("source vertex {vertex} out of range for tree with {n} vertices")]
    SourceOutOfRange { vertex: usize, n: usize },

    #[error("vertex {index} out of range for tree with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("tree has {n} vertex(es); at least 2 are required")]
    DegenerateTree { n: usize },

    #[error("tree has no edges")]
    NoEdges,

    #[error("predicted size {predicted} exceeds limit {limit}")]
    SizeLimitExceeded { predicted: String, limit: u64 },

    #[error("formula {formula} did not evaluate to a non-negative integer: {value}")]
    FormulaNonIntegral {
        formula: &'static str,
        value: String,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("need at least 3 points for a fit, got {0}")]
    InsufficientPoints(usize),

    #[error("non-positive value in log-log fit: ({n}, {value})")]
    NonPositiveValue { n: f64, value: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
