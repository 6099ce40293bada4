use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division of {dividend} by {divisor} is not exact")]
    NonExactDivision { dividend: String, divisor: String },

    #[error("polynomial of degree {degree} cannot be reversed at degree {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("constant term {0} is not a unit")]
    NonUnitConstantTerm(String),

    #[error("series is valid through degree {valid_through}, degree {requested} requested")]
    InsufficientPrecision { valid_through: usize, requested: usize },

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("Dynkin component on nodes {nodes:?} is not a simple type")]
    UnclassifiableComponent { nodes: Vec<usize> },

    /// A failed step inside the subset recursion, tagged with the group and subset.
    #[error("recursion for {group} at subset {subset}: {source}")]
    Recursion {
        group: String,
        subset: String,
        #[source]
        source: Box<Error>,
    },

    #[error("difference polynomial of {group} is not antisymmetric")]
    InconsistentDifference { group: String },

    #[error("P for {group} has constant term {value}, expected 1")]
    ConstantTerm { group: String, value: String },

    #[error("binomial expansion of c_{i}: coefficient {value} is not an integer")]
    NonIntegralCoefficient { i: usize, value: String },

    #[error("binomial expansion of c_{i} fails at n = {n}: expected {expected}, got {actual}")]
    VerificationMismatch {
        i: usize,
        n: usize,
        expected: String,
        actual: String,
    },

    #[error("plethystic logarithm coefficient e({i},{n}) = {value} is not an integer")]
    NonIntegralPLog { i: usize, n: usize, value: String },

    #[error("cache file {path}: {message}")]
    Cache { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
