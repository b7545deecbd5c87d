use thiserror::Error;

use crate::model::ValidationReport;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),
    #[error("value {value} appears twice in the range of `{variable}`")]
    DuplicateValue { variable: String, value: Value },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value {value} is not in the range of `{variable}`")]
    OutOfRange { variable: String, value: Value },
    #[error("variable `{0}` bound twice")]
    DuplicateBinding(String),
    #[error("context is missing exogenous variable `{0}`")]
    MissingContext(String),
    #[error("context binds endogenous variable `{0}`")]
    EndogenousInContext(String),
    #[error("contrast has no variables")]
    EmptyContrast,
    #[error("contrast sides give variable {0} the same value")]
    OverlappingContrast(String),
    #[error("contrast sides bind different variables")]
    MismatchedContrast,
    #[error("cannot intervene on exogenous variable `{0}`")]
    ExogenousIntervention(String),
    #[error("`{0}` is exogenous and cannot be a target")]
    ExogenousTarget(String),
}

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("model `{}` is invalid:\n{}", .0.model, .0)]
    Invalid(Box<ValidationReport>),
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
    #[error("order is not a topological order of the model's endogenous variables")]
    NotTopological,
}

/// Failures when pairing a base model with an extension.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("variable `{0}` of the base model is missing from the extension")]
    MissingVariable(String),
    #[error("variable `{0}` is exogenous in one model and endogenous in the other")]
    KindMismatch(String),
    #[error("variable `{0}` has different ranges in the two models")]
    RangeMismatch(String),
    #[error("witness: {0}")]
    Witness(String),
}
