use thiserror::Error;

/// Errors raised while building or combining structure tensors and forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure index {0} is outside 1..=6")]
    StructureIndex(usize),
    #[error("block size n must be at least 1")]
    BlockSize,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("variant mismatch: expected {expected}, got {actual}")]
    Variant { expected: crate::structure::Variant, actual: crate::structure::Variant },
    #[error("target array is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("sign {value} at index {index} is not +1 or -1")]
    InvalidSign { index: usize, value: i64 },
    #[error("structure J{k} is not block-homogeneous at coordinate {index}")]
    NotBlockHomogeneous { k: usize, index: usize },
    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },
    #[error("metric is not symmetric positive-definite")]
    InvalidMetric,
    #[error("no table for J{k} ({variant})")]
    MissingTable { k: usize, variant: crate::structure::Variant },
    #[error("malformed structure table: {0}")]
    Table(String),
}

/// A parse failure, carrying the byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    VariableOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    Domain,
    NonFinite,
    VariableOutOfRange,
}

/// An evaluation failure. `subtree` is the printed form of the offending node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {subtree}", match .kind {
    EvalErrorKind::DivisionByZero => "division by zero",
    EvalErrorKind::Domain => "argument outside function domain",
    EvalErrorKind::NonFinite => "non-finite value",
    EvalErrorKind::VariableOutOfRange => "variable out of range",
})]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subtree: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("two-form is degenerate; the Hamilton field is not unique")]
    Singular,
    #[error("linear solve and closed form disagree by {0:e}")]
    FieldMismatch(f64),
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error("implicit midpoint did not converge at step {step} after {iterations} iterations")]
    NoConvergence { step: usize, iterations: usize },
    #[error("non-finite state at step {step}")]
    Divergence { step: usize },
    #[error("evaluation failed at step {step}: {source}")]
    Evaluation { step: usize, source: EvalError },
    #[error("{0}")]
    Precondition(String),
}

/// Top-level error for callers that mix several modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
