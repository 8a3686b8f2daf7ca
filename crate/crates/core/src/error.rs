use thiserror::Error;

/// Errors raised by constructors and operations with hard preconditions.
///
/// Label-axiom violations are not errors: [`crate::validate`] reports them as
/// findings. Operations that need a valid complex return
/// [`Error::InvalidOrbifold`] carrying the number of findings.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no simplices given")]
    EmptyInput,
    #[error("simplex {0:?} is empty")]
    EmptySimplex(Vec<u32>),
    #[error("simplex {0:?} repeats a vertex")]
    DuplicateVertex(Vec<u32>),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: u32, count: u32 },
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<u32>),
    #[error("{face:?} is not a face of {simplex:?}")]
    NotAFace { simplex: Vec<u32>, face: Vec<u32> },
    #[error("{face:?} is not a facet of {simplex:?}")]
    NotAFacet { simplex: Vec<u32>, face: Vec<u32> },
    #[error("element {element} out of range for isotropy order {order}")]
    ElementOutOfRange { element: u64, order: u32 },
    #[error("isotropy order must be at least {min}, got {order}")]
    InvalidOrder { order: u32, min: u32 },
    #[error("unit {unit} is not invertible modulo {order}")]
    InvalidUnit { unit: u32, order: u32 },
    #[error("orbifold complex fails validation with {0} finding(s)")]
    InvalidOrbifold(usize),
    #[error("subcomplex is not closed under faces: {0:?} is missing")]
    NotFaceClosed(Vec<u32>),
    #[error("cover does not contain simplex {0:?}")]
    CoverNotTotal(Vec<u32>),
    #[error("component {sub} is not contained in component {sup}")]
    NotContained { sub: usize, sup: usize },
    #[error("{requested} cone points requested but the triangulation has {available} vertices")]
    TooManyConePoints { requested: usize, available: usize },
    #[error("factor of a product is empty")]
    EmptyFactor,
    #[error("unsatisfiable random profile: {0}")]
    Profile(String),
    #[error("triangulation self-check failed: {0}")]
    SelfCheck(String),
    #[error("unsupported format version {0:?}")]
    UnknownVersion(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
