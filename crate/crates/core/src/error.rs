use thiserror::Error;

use crate::sequences::SesCondition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable layout mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable index {index} out of range for {kind} (have {len})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    /// The series has zero constant term, i.e. the modeled function vanishes
    /// at the origin and cannot be inverted.
    #[error("series is not a unit (zero constant term); rescaling unavailable")]
    NonUnit,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("term of degree {degree} exceeds budget {budget}")]
    DegreeAboveBudget { degree: u32, budget: u32 },

    #[error("bidegree mismatch: {0}")]
    BidegreeMismatch(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid morphism pair: {0}")]
    InvalidPair(String),

    #[error("budget contract violated: {0}")]
    BudgetContract(String),

    #[error("dimension mismatch in linear algebra: {0}")]
    Shape(String),

    /// A putative subspace inclusion `I ⊆ K` failed; a complex is broken.
    #[error("inclusion violation: {0}")]
    InclusionViolation(String),

    #[error("target is not closed; residual {0}")]
    NotClosed(String),

    #[error("differentials do not compose to zero at grade {0}")]
    NotAComplex(usize),

    #[error("chain map does not commute with differentials at grade {0}")]
    NotAChainMap(usize),

    #[error("short exact sequence fails at grade {grade}: {condition}")]
    Ses { grade: usize, condition: SesCondition },

    #[error("connecting homomorphism: {0}")]
    ZigZag(String),

    #[error("json: {0}")]
    Json(String),
}
