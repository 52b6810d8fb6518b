//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The zero vector has no primitive direction.
    #[error("zero vector has no primitive direction")]
    ZeroVector,

    /// A sweep direction parallel to the affine hull of the swept cell.
    /// Upstream multiplicity pruning must have removed these; hitting this
    /// error signals a convention bug rather than a geometric situation.
    #[error("sweep direction {dir} is parallel to the hull of the cell")]
    DegenerateSweep { dir: String },

    #[error("non-generic path: {0}")]
    NonGenericPath(String),

    #[error("non-generic configuration: {0}")]
    NonGenericConfiguration(String),

    #[error("non-generic query point: {0}")]
    NonGenericQuery(String),

    /// A derivation with an unmarked term is not nilpotent; its exponential
    /// would not terminate.
    #[error("exponential of a derivation with an unmarked term does not terminate")]
    NonNilpotent,

    #[error("forbidden join: {0}")]
    ForbiddenJoin(String),

    #[error("mark sets collide")]
    MarkCollision,

    /// A tree admits a positive-dimensional family of realizations, which
    /// signals that the input points are not in generic position.
    #[error("tree {0} admits a positive-dimensional realization family")]
    AmbiguousRealization(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error reports a non-generic geometric situation (as
    /// opposed to bad input or an environment failure).
    pub fn is_non_generic(&self) -> bool {
        matches!(
            self,
            Error::NonGenericPath(_)
                | Error::NonGenericConfiguration(_)
                | Error::NonGenericQuery(_)
                | Error::AmbiguousRealization(_)
                | Error::DegenerateSweep { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
