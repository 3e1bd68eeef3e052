use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the contest toolkit.
///
/// Variants fall into two families: `Domain`/`InvalidSpec` are input
/// validation failures, everything else is a numerical failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid contest: {0}")]
    InvalidSpec(String),

    #[error("quadrature did not converge on [{lo}, {hi}] within {max_subdivisions} subdivisions")]
    NonConvergence {
        lo: f64,
        hi: f64,
        max_subdivisions: usize,
    },

    #[error("negative argument {value:e} passed to the inverse cost at ability {ability}")]
    NegativeArgument { ability: f64, value: f64 },

    #[error("rejection sampler starved: acceptance rate {rate:e} over {trials} probe trials")]
    AcceptanceStarvation { rate: f64, trials: u64 },

    #[error("solver did not converge: {0}")]
    Solver(String),
}

impl Error {
    /// True for input-validation failures, false for numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::InvalidSpec(_))
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
