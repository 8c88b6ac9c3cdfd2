use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid friction coefficient: {0}")]
    InvalidFriction(String),
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("invalid count: {0}")]
    InvalidCount(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no root in bracket ({lo}, {hi}) for {what}")]
    NoRootInBracket { what: String, lo: f64, hi: f64 },
    #[error("did not converge: {0}")]
    NonConvergence(String),
    #[error("coefficients annihilate the eigenfunction: {0}")]
    ZeroMode(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unsupported profile: {0}")]
    Unsupported(String),
    #[error("time step violates stability bound: dt*lambda_max = {0} >= 2.5")]
    StabilityViolation(f64),
    #[error("blow-up detected at t = {0}")]
    BlowupDetected(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
