use thiserror::Error;

use crate::monoid::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid monoid: {0}")]
    InvalidMonoid(ValidationReport),

    #[error("family parameter out of range: {0}")]
    BadParameter(String),

    #[error("element {element} is not valid for a monoid of size {size}")]
    BadElement { element: usize, size: usize },

    #[error("sets A and B overlap on label {0:?}")]
    OverlappingLabels(String),

    #[error("label {0:?} appears more than once")]
    DuplicateLabel(String),

    #[error("subset is not closed: {left} * {right} = {product} lies outside it")]
    NotClosed {
        left: usize,
        right: usize,
        product: usize,
    },

    #[error("subset does not contain the identity")]
    MissingIdentity,

    #[error("size guard: {what} has {size} points, limit is {limit} (set RM_GUARD_OVERRIDE to lift)")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("empty product: the semigroup has no identity element")]
    EmptyProduct,

    #[error("words belong to different posets")]
    PosetMismatch,

    #[error("function arrays are over different partial semigroups")]
    SemigroupMismatch,

    #[error("point {0} is out of range")]
    BadPoint(usize),

    #[error("classes of {0} and {1} are comparable in X(M)")]
    Comparable(usize, usize),

    #[error("mu input violates its invariants: {0}")]
    MuInvariant(String),

    #[error("sequence is not basic at index {0}")]
    NotBasic(usize),

    #[error("word {index} violates a precondition: {reason}")]
    WordPrecondition { index: usize, reason: String },

    #[error("invalid located word: {0}")]
    BadWord(String),

    #[error("search bounds too small: {0}")]
    BoundsTooSmall(String),

    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
