use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dilation p={p}, q={q}: {reason}")]
    InvalidDilation { p: u64, q: u64, reason: &'static str },

    #[error("subband m={m} out of range 1..={max}")]
    SubbandOutOfRange { m: i64, max: u64 },

    #[error("scale j={j} exceeds the configured bound |j| <= {bound}")]
    ScaleOverflow { j: i64, bound: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(
        "quadrature did not reach tolerance {tol:e} (error estimate {estimate:e}) within {evals} evaluations"
    )]
    Convergence { tol: f64, estimate: f64, evals: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
