use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Variants are split into domain errors
/// (the caller passed inconsistent input) and resource errors (the input is
/// valid but the requested computation is too large for the chosen route).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot choose {k} items from {n}")]
    ChooseTooMany { n: u64, k: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outcome distribution is invalid: {0}")]
    InvalidDistribution(String),

    #[error("no payoff given for outcome `{0}`")]
    MissingPayoff(String),

    #[error("macrostate mapping is undefined on microstate {0}")]
    UnmappedMicrostate(String),

    #[error("initial state is inconsistent with the coupled system: {0}")]
    InconsistentState(String),

    #[error("histogram covers {histogram} macrostates but the distribution has {distribution}")]
    DomainMismatch { histogram: usize, distribution: usize },

    #[error("{count} microstates exceed the enumeration cap of {cap}; use the counting operations instead")]
    EnumerationCap { count: u128, cap: u64 },

    #[error("log-space mode is capped at N, q <= {cap} (got {size})")]
    LogModeCap { size: u64, cap: u64 },

    #[error("exact mode is capped at q + max(N_A, N_B) <= {cap} (got {size}); use log-space mode")]
    ExactModeCap { size: u64, cap: u64 },
}

impl Error {
    /// True for errors caused by the size of the request rather than its
    /// validity.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::ExactModeCap { .. } | Error::LogModeCap { .. })
    }
}
