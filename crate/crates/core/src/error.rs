use thiserror::Error;

/// Errors raised by state construction, operator application and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("cannot normalize a zero vector")]
    ZeroNorm,

    #[error("non-finite amplitude at level {index}")]
    NonFinite { index: usize },

    #[error(
        "exponential series did not converge after {terms} terms \
         (last term norm {last_term_norm:e}, partial sum norm {partial_norm:e})"
    )]
    NonConvergence {
        terms: usize,
        last_term_norm: f64,
        partial_norm: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("nonlinear function vanishes on the whole range; no state exists")]
    NoState,

    #[error("recursion diverged at level {index} before the tail decayed")]
    Divergence { index: usize },

    #[error("exponential form unavailable: f({index}) = 0")]
    ExponentialFormUnavailable { index: usize },

    #[error("truncation too small: dim {dim}, lost mass {lost:e}")]
    Truncation { dim: usize, lost: f64 },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// True for failures caused by finite truncation or numerics rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::NonConvergence { .. }
                | Error::Divergence { .. }
                | Error::NonFinite { .. }
                | Error::InternalConsistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
