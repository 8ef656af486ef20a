use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid measurement configuration: {0}")]
    InvalidConfiguration(String),

    #[error("budgets must be strictly ascending and nonempty, got {0:?}")]
    BudgetsNotAscending(Vec<usize>),

    #[error("budget {budget} is smaller than the {observed} existing observations")]
    BudgetBelowObservations { budget: usize, observed: usize },

    #[error("strategy `{0}` needs a measurement oracle to generate configurations")]
    OracleRequired(String),

    #[error("sampling strategy violated size monotonicity: |Ω({prev_budget})| = {prev} > |Ω({budget})| = {size}")]
    MonotonicityViolated {
        prev_budget: usize,
        prev: usize,
        budget: usize,
        size: usize,
    },

    #[error("measurement set is empty")]
    EmptyMeasurementSet,

    #[error("parametric fit needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("measurement set has {values} values for a configuration of {pairs} pairs")]
    ValueCountMismatch { values: usize, pairs: usize },

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("strategy `{strategy}` is not admissible: cost {cost} >= C_max({n}) = {bound} at budget {budget}")]
    Inadmissible {
        strategy: String,
        budget: usize,
        n: usize,
        cost: f64,
        bound: f64,
    },

    #[error("no admissible candidate strategy remains")]
    NoAdmissibleCandidate,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_param(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}
