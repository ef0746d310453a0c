use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    #[error("invalid bilinear form: {0}")]
    InvalidForm(String),

    #[error("malformed flag type: {0}")]
    MalformedPartition(String),

    #[error("{classes} weight classes exceed the enumeration bound of {bound}")]
    ClassBoundExceeded { classes: usize, bound: usize },

    #[error("weight vectors admit no common Borel order: {0}")]
    Incompatible(String),

    #[error("subspace is not stable under the group: {0}")]
    NotStable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
