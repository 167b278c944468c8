use thiserror::Error;

use crate::predicate::Assignment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("predicate index {index} out of range for family of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("assignment has dimension {got}, family expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid family definition: {0}")]
    InvalidFamily(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("equality is undecidable for this family: no strategy configured")]
    EqualityUndecidable,

    #[error("family has no feasibility tester for sign conditions")]
    NoFeasibilityTester,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no witness found for an immediate-descendant pair (internal bug)")]
    NoWitness,

    #[error("guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded { what: &'static str, actual: usize, limit: usize },

    #[error("inconsistent teacher: assignment {assignment} answered {first} and then {second}")]
    InconsistentTeacher { assignment: Assignment, first: bool, second: bool },

    #[error("scripted teacher diverged at query {seq}: {reason}")]
    ScriptDivergence { seq: usize, reason: String },

    #[error("teacher failed: {0}")]
    Teacher(String),

    #[error("target not in class: transcript entry {seq} ({assignment}) answered {answer} but the learned hypothesis gives {hypothesis}")]
    TargetNotInClass { seq: usize, assignment: Assignment, answer: bool, hypothesis: bool },

    #[error("session state: {0}")]
    Session(String),

    #[error("cyclic input: {0}")]
    Cyclic(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error came from malformed user input rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidFamily(_)
                | Error::Invalid(_)
                | Error::Parse(_)
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Cyclic(_)
        )
    }

    pub fn is_teacher(&self) -> bool {
        matches!(
            self,
            Error::InconsistentTeacher { .. }
                | Error::ScriptDivergence { .. }
                | Error::Teacher(_)
                | Error::TargetNotInClass { .. }
        )
    }
}
