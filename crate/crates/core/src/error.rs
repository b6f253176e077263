use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("constant `{0}` is interpreted outside the requested subset")]
    MissingConstant(String),
    #[error("element {element} is out of range for a structure of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("hom(A, B) is empty; the arrow is vacuous")]
    EmptyHom,
    #[error("resource limit hit: {what} exceeded {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },
    #[error("automorphism is not a nontrivial involution")]
    NotInvolution,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown checker `{0}`")]
    UnknownChecker(String),
    #[error("amalgamation failed: {0}")]
    ApFailure(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
