use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points are affinely dependent")]
    AffinelyDependent,

    #[error("all points lie on a common vertical hyperplane; the lower side is undefined")]
    VerticalDegenerate,

    #[error("duplicate point at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    /// Input is not in general position: the named input points are co-spherical
    /// (or otherwise violate the general-position assumption).
    #[error("degenerate input: points {subset:?} are co-spherical")]
    Degenerate { subset: Vec<u32> },

    #[error("{what} out of range: {value} not in [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("combinatorial vertex is empty")]
    EmptyVertex,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("constraint set is infeasible")]
    Infeasible,

    #[error("input size {n} exceeds the oracle limit {limit} (override to force)")]
    SizeGuard { n: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
