use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown cell: {0}")]
    UnknownCell(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("face index {index} out of range for a cube of dimension {dim}")]
    FaceIndex { index: usize, dim: usize },
    #[error("cube set is not face-closed: missing {0}")]
    NotFaceClosed(String),
    #[error("invalid cube chain: {0}")]
    InvalidChain(String),
    #[error("invalid vector field: {0}")]
    InvalidField(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
