use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("payoff premium alpha = {0} must lie in [0, 1); for alpha >= 1 a single x link outweighs two y links and no y agent can be induced")]
    AlphaOutOfRange(f64),

    #[error("invalid ring: n = {n}, k = {k} (need n >= 2 and 1 <= k <= n/2)")]
    InvalidRing { n: usize, k: usize },

    #[error("agent index {index} out of range for a ring of {n} agents")]
    AgentOutOfRange { index: usize, n: usize },

    #[error("profile has {got} agents, ring has {expected}")]
    ProfileLength { expected: usize, got: usize },

    #[error("agent {0} appears in both influence sets")]
    OverlappingInfluence(usize),

    #[error("x segment of length {0} cannot be stabilized (needs length >= 2)")]
    ShortXSegment(usize),

    #[error("y segment of length {length} cannot be stabilized (needs length >= {required})")]
    ShortYSegment { length: usize, required: usize },

    #[error("budget of {budget} adversaries is short by {shortfall}")]
    InsufficientBudget { budget: usize, shortfall: usize },

    #[error("enumeration over 2^{n} profiles exceeds the cap of n <= {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("{0} requires k = 1")]
    RequiresUnitRing(&'static str),

    #[error("invalid profile spec {spec:?}: {reason}")]
    ProfileSpec { spec: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
