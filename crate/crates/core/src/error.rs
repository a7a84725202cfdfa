use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("cannot parse rational number from {0:?}")]
    ParseRational(String),

    #[error("invalid continuity vector: {0}")]
    InvalidContinuity(String),

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("degenerate simplex {0:?}")]
    DegenerateSimplex(Vec<usize>),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("simplex {face:?} is not a face of {cell:?}")]
    NotAFace { face: Vec<usize>, cell: Vec<usize> },

    #[error("simplex {0:?} is not in the triangulation")]
    NotInTriangulation(Vec<usize>),

    #[error("not a subtriangulation: {0}")]
    NotSubtriangulation(String),

    #[error("unknown catalog mesh {0:?}")]
    UnknownMesh(String),

    #[error("polynomials live on different simplices ({0:?} vs {1:?})")]
    SimplexMismatch(Vec<usize>, Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("local degrees of freedom are not unisolvent: {0}")]
    NotUnisolvent(String),

    #[error("input does not belong to the space: {0}")]
    NotAMember(String),

    #[error("mismatched parameters: {0}")]
    ParameterMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
