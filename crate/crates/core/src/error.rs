use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed map: entry {value} at position {position} is outside 1..={target_size}")]
    MalformedMap {
        position: usize,
        value: usize,
        target_size: usize,
    },

    #[error("map sizes must be positive (source {source_size}, target {target_size})")]
    EmptyMap {
        source_size: usize,
        target_size: usize,
    },

    #[error("dimension {requested} exceeds truncation {max_dim}")]
    DimensionExceedsTruncation { requested: usize, max_dim: usize },

    #[error("decalage shift {shift} must be smaller than max_dim {max_dim}")]
    ShiftTooLarge { shift: usize, max_dim: usize },

    #[error("mismatched truncations: {0}")]
    MismatchedTruncation(String),

    #[error("level {level} has {size} elements, above the cap of {cap}")]
    CapExceeded { level: usize, size: usize, cap: usize },

    #[error("domain of {size} points exceeds the automorphism search bound {bound}")]
    DomainTooLarge { size: usize, bound: usize },

    #[error("unknown builtin theory `{0}`")]
    UnknownBuiltin(String),

    #[error("unknown element `{label}` at level {level}")]
    UnknownElement { level: usize, label: String },

    #[error("malformed structure: {0}")]
    MalformedStructure(String),

    #[error("malformed functor document: {0}")]
    MalformedFunctor(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("constraint map has target size {found}, expected {expected}")]
    ConstraintTarget { expected: usize, found: usize },

    #[error("definable set pulls back to the empty set")]
    EmptyPullback,

    #[error("not an equivalence relation: {0}")]
    NotAnEquivalence(String),

    #[error("map is not natural; validation failed with {witnesses} witness(es)")]
    UnvalidatedMap { witnesses: usize },

    #[error("source functor is not representable: {0}")]
    NotRepresentable(String),

    #[error("invalid arguments: {0}")]
    InvalidArgument(String),

    #[error("cochain complex invariant violated: {0}")]
    ComplexInvariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
