use thiserror::Error;

/// Errors raised by library operations on malformed inputs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a space needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("at most {max} points are supported, got {got}")]
    TooManyPoints { got: usize, max: usize },
    #[error("matrix is not square: {labels} labels but row {row} has {len} entries")]
    NotSquare {
        labels: usize,
        row: usize,
        len: usize,
    },
    #[error("matrix has {labels} labels but {rows} rows")]
    RowCountMismatch { labels: usize, rows: usize },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("a segment or line needs two distinct points, got {0} twice")]
    SamePoint(usize),
    #[error("triple ({0}, {1}, {2}) repeats a point")]
    DegenerateTriple(usize, usize, usize),
    #[error("size mismatch: expected {expected} points, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("betweenness is inconsistent: {0} conflicts with {1}")]
    Inconsistent(String, String),
    #[error("malformed linear system: {0}")]
    MalformedSystem(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("digraph has a loop at vertex {0}")]
    Loop(usize),
    #[error("exhaustive search on {n} points is not supported (limit {max})")]
    SearchTooLarge { n: usize, max: usize },
    #[error("enumeration is only supported for n in {{3, 4}}, got {0}")]
    UnsupportedSize(usize),
    #[error("distance bound must be at least 1, got {0}")]
    InvalidBound(u32),
    #[error("witness failed verification against the queried relation")]
    WitnessRejected,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
