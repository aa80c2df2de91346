use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("unsupported root datum: {0}")]
    Unsupported(String),
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },
    #[error("Weyl group order exceeds bound {0}")]
    WeylBound(usize),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("marker mismatch at node {node}: expected {expected}")]
    MarkerMismatch { node: usize, expected: &'static str },
    #[error("B(alpha, mu) = {0} is odd at an SU3 node")]
    OddPairing(i64),
    #[error("denominator is not supported on the sublattice")]
    DenominatorNotOnLattice,
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("operation requires {0}")]
    Requires(&'static str),
    #[error("no numeric value assigned to {0}")]
    Unassigned(String),
    #[error("evaluated denominator vanishes (|den| = {0:e}); resample")]
    Resample(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
