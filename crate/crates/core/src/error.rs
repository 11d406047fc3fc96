use thiserror::Error;

/// Errors raised by constructions on finite sets, spans, posets and diagrams.
///
/// Law checkers never return these for a failed law; failures go into a
/// [`crate::report::Report`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("codomain mismatch: {0}")]
    CodMismatch(String),
    #[error("domain mismatch: {0}")]
    DomMismatch(String),
    #[error("map entry out of range: {0}")]
    OutOfRange(String),
    #[error("label clash: {0}")]
    LabelClash(String),
    #[error("object mismatch: {0}")]
    ObjMismatch(String),
    #[error("morphism class violation: {0}")]
    ClassViolation(String),
    #[error("cell boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a pullback: {0}")]
    NotAPullback(String),
    #[error("coherence failure: {0}")]
    CoherenceFailure(String),
    #[error("commuter failure: {0}")]
    CommuterFailure(String),
    #[error("cell absent: {0}")]
    CellAbsent(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("not monotone: {0}")]
    NotMonotone(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
