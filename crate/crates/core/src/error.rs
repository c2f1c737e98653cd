use thiserror::Error;

use crate::model::TaskId;

/// Errors raised by task construction, scheduling and workload handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("task set is empty")]
    EmptyTaskSet,
    #[error("task {0} has burst 0; bursts must be at least 1 tu")]
    ZeroBurst(TaskId),
    #[error("task {0} has weight 0; weights must be at least 1")]
    ZeroWeight(TaskId),
    #[error("duplicate task id {0}")]
    DuplicateId(TaskId),
    #[error("time quantum must be at least 1 tu")]
    ZeroQuantum,
    #[error("burst must be at least 1 tu")]
    NonPositiveBurst,
    #[error("reference weight must be at least 1")]
    ZeroReferenceWeight,
    #[error("queue index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
}

pub type Result<T> = std::result::Result<T, SchedError>;
