use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} leaves")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} entries for n = {n}, found {found}")]
    WrongLength {
        n: usize,
        expected: usize,
        found: usize,
    },

    #[error("need at least {min} leaves, got {n}")]
    TooFewLeaves { n: usize, min: usize },

    #[error("not an ultrametric: the maximum over triple ({0}, {1}, {2}) is attained only once")]
    NotUltrametric(usize, usize, usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown leaf label {0}")]
    UnknownLeaf(usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("leaves are not equidistant from the root: leaf {leaf} has depth {depth}, expected {expected}")]
    NotEquidistant {
        leaf: usize,
        depth: String,
        expected: String,
    },

    #[error("internal edge length {0} is not positive")]
    NonPositiveEdge(String),

    #[error("operation requires a binary topology")]
    NonBinary,

    #[error("n = {n} exceeds the limit of {max} for this operation")]
    TooManyLeaves { n: usize, max: usize },

    #[error("the trees do not form a generic pair")]
    NonGenericPair,

    #[error("turning point outside the NNI / four-clade / no-change trichotomy: {0}")]
    TheoremViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no generic pair found after {0} height draws; increase the height range")]
    ResampleLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
