//! Shared error type for the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("rank {rank} out of range for type {ty}")]
    RankOutOfRange { ty: String, rank: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("frobenius kind incompatible with datum: {0}")]
    IncompatibleKind(String),
    #[error("element belongs to a different root datum")]
    DatumMismatch,
    #[error("element is not a minimal coset representative for the given type")]
    NotMinimalRep,
    #[error("enumeration budget exceeded: would need {required} elements (budget {budget})")]
    BudgetExceeded { required: usize, budget: usize },
    #[error("root is not in I")]
    NotInI,
    #[error("flag type is not a subset of I")]
    NotSubsetOfI,
    #[error("set is not open in the stratum closure: sandwiched element {witness}")]
    NotOpenInClosure { witness: String },
    #[error("element is not a lower neighbor of w in the twisted order")]
    NotLowerNeighbor,
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("bad signature: {0}")]
    BadSignature(String),
    #[error("not a minuscule pattern: {0}")]
    NotMinusculePattern(String),
    #[error("(r, s) not coprime")]
    NotCoprime,
    #[error("frame axiom violated: {0}")]
    FrameAxiomViolation(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}
