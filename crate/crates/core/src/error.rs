use thiserror::Error;

/// Errors raised while building instances, analysing them, or running experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("instance has no arms")]
    EmptyInstance,

    #[error("arm {arm}: {reason}")]
    InvalidArm { arm: usize, reason: String },

    #[error("threshold tau must be finite, got {0}")]
    InvalidThreshold(f64),

    #[error("concentration parameter {name} must be finite and positive, got {value}")]
    InvalidConcentration { name: &'static str, value: f64 },

    #[error("cannot derive {name}: {reason}; supply it explicitly")]
    ConcentrationUndetermined { name: &'static str, reason: String },

    #[error("optimal arm is not unique: arms {0:?} attain the defining minimum")]
    NonUniqueOptimal(Vec<usize>),

    #[error("arm {first} is not pair-optimal with respect to arm {second}")]
    PairOrderViolation { first: usize, second: usize },

    #[error("expected a two-armed instance, got {0} arms")]
    WrongArity(usize),

    #[error("arm {0} is feasible; every arm must violate the threshold")]
    NotAllInfeasible(usize),

    #[error("budget {budget} is too small for {arms} arms (need at least {minimum})")]
    BudgetTooSmall { arms: usize, budget: u64, minimum: u64 },

    #[error("active arm set is empty")]
    EmptyActiveSet,

    #[error("arm index {index} out of range for {arms} arms")]
    ArmOutOfRange { index: usize, arms: usize },

    #[error("replication count must be at least 1")]
    NoReplications,

    #[error("unknown algorithm identifier `{0}` (expected csr, if or sr)")]
    UnknownAlgorithm(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
