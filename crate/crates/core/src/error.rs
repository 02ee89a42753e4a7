use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("half-space has a zero normal vector")]
    ZeroNormal,
    #[error("the half-space system is infeasible")]
    EmptyPolytope,
    #[error("the half-space system admits a recession direction (polyhedron, not polytope)")]
    UnboundedInput,
    #[error("bounding-box margin must be strictly positive")]
    NonPositiveMargin,
    #[error("cap offset C must be strictly positive")]
    NonPositiveC,
    #[error("vertex {0} is not a vertex of the polytope")]
    NotAVertex(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("operand `{0}` is still unbounded after adding its cap half-spaces")]
    UnboundedAfterCaps(String),
    #[error("normal vector {0} has an irrational length and cannot be normalized exactly")]
    IrrationalNormal(String),
    #[error("invalid tolerance zone: {0}")]
    InvalidZone(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("inconsistent dimension: {0}")]
    InconsistentDimension(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("at expression node {path}: {source}")]
    AtNode {
        path: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn at_node(self, path: &str) -> Self {
        match self {
            e @ Error::AtNode { .. } => e,
            e => Error::AtNode {
                path: path.to_string(),
                source: Box::new(e),
            },
        }
    }

    /// Strips node annotations.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtNode { source, .. } => source.root_cause(),
            e => e,
        }
    }

    /// True for errors caused by the caller's input rather than by a broken
    /// internal invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self.root_cause(), Error::Invariant(_))
    }
}
