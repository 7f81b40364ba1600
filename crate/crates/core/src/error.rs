use thiserror::Error;

use crate::model::MeasureKind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unknown value {value:?} for variable {variable:?}")]
    UnknownValue { variable: String, value: String },
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("scopes of the atom or query overlap")]
    OverlappingScopes,
    #[error("table has no entry for atom {0}")]
    MissingEntry(String),
    #[error("table has {got} entries but the scheme has {expected} atoms")]
    WrongSize { expected: usize, got: usize },
    #[error("scheme is too large for a dense table")]
    TooLarge,
    #[error("cannot condition on an assignment of plausibility zero")]
    ConditionOnImpossible,
    #[error("{kind} joint is not normalized: {detail}")]
    NotNormalized { kind: MeasureKind, detail: String },
    #[error("invalid joint: {0}")]
    InvalidJoint(String),
    #[error("operation requires a full GCPP")]
    NotFull,
    #[error("expected a {expected} table, got {got}")]
    KindMismatch { expected: MeasureKind, got: MeasureKind },
    #[error("maps have different key sets")]
    KeyMismatch,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("SQCPP is inconsistent: zero and undefined share a class")]
    InconsistentSqcpp,
    #[error("no combination operation for {0} tables")]
    CombineUnavailable(MeasureKind),
    #[error("variable {0} has no Markov boundary in the structure")]
    NoBoundary(String),
    #[error("graph has a cycle through {0}")]
    Cycle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
