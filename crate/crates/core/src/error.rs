use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KcutError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid vertex subset: {0}")]
    InvalidSubset(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("cannot contract: {0}")]
    InvalidContraction(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need n >= k, got n = {n}, k = {k}")]
    TooFewVertices { n: usize, k: usize },
    #[error("instance too large: {what} supports n <= {limit}, got n = {n}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        n: usize,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, KcutError>;
