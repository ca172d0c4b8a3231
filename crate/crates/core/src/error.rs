use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("graph has {vertices} vertices, exceeding the bound of {bound} for {what}")]
    TooLarge {
        what: &'static str,
        vertices: usize,
        bound: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unresolved comparison: {0}")]
    Unresolved(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
