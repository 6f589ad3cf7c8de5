use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerically rank-deficient interference columns (singular value ratio {ratio:.3e})")]
    RankDeficient { ratio: f64 },

    #[error("too many degenerate channel draws: {resamples} resamples over {trials} trials")]
    ResampleLimit { resamples: u64, trials: u64 },

    #[error("search space of {candidates} allocations exceeds budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },

    #[error("scan cap of N = {cap} reached without satisfying the threshold")]
    ScanCap { cap: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
