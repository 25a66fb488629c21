use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent matrix must be square with n >= 2 (got {rows} rows, row lengths {cols:?})")]
    BadShape { rows: usize, cols: Vec<usize> },

    #[error("diagonal entry ({index},{index}) is {value}; the diagonal of an exponent matrix must be zero")]
    NonZeroDiagonal { index: usize, value: i64 },

    #[error("no maximal order contains the set: the constraint graph has a negative cycle")]
    NegativeCycle,

    #[error("integer overflow while summing exponents")]
    Overflow,

    #[error("the set is not an order")]
    NotAnOrder,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("the polytope is empty")]
    EmptyPolytope,

    #[error("lattice point enumeration exceeded the limit of {limit} points")]
    TooManyPoints { limit: usize },

    #[error("vertex list is empty")]
    EmptyVertexList,

    #[error("vertex has {got} coordinates, expected at least 2")]
    BadVertex { got: usize },

    #[error("lattice point has first coordinate {0}, expected 0")]
    UnnormalizedPoint(i64),

    #[error("index ({0},{1}) out of range")]
    IndexOutOfRange(usize, usize),

    #[error("conjugating matrix is singular")]
    SingularConjugator,

    #[error("matrix is singular")]
    SingularInput,

    #[error("matrix has an entry outside the valuation ring")]
    NonIntegralInput,

    #[error("matrix is already diagonal; every diagonal conjugate is integral")]
    AlreadyDiagonal,

    #[error("malformed rational {0:?}")]
    BadRational(String),

    #[error("matrix must be square and non-empty")]
    NotSquare,
}
