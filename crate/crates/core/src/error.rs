use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("heuristic weight must be >= 1, got {0}")]
    InvalidWeight(f64),
    #[error("weight decrement must be > 0, got {0}")]
    InvalidDecrement(f64),
    #[error("independence inflation must be >= 1, got {0}")]
    InvalidEpsilon(f64),
    #[error("thread budget must be >= 1")]
    NoThreads,
    #[error("parent chain from {0} does not reach the start state")]
    BrokenParentChain(crate::domain::StateKey),
}
