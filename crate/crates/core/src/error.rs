use thiserror::Error;

use crate::reduction::ReductionTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no valid color for r-set {set:?}: every class splits one of its pairs")]
    NoValidColor { set: Vec<usize> },

    #[error("no acceptable base coloring after {attempts} attempts")]
    Exhausted { attempts: u64 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("reduction kept {kept} vertices, too few to form any {needed}-set")]
    DegenerateReduction {
        kept: usize,
        needed: usize,
        trace: Box<ReductionTrace>,
    },

    #[error("witness rejected: {0}")]
    Witness(#[from] crate::witness::WitnessError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
