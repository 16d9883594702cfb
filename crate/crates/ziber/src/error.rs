//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be finite")]
    NonFinite { what: &'static str },
    #[error("the GEV link requires a shape parameter")]
    MissingEps,
    #[error("a shape parameter is only meaningful for the GEV link")]
    UnexpectedEps,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("response must be 0 or 1; found {value} at observation {index}")]
    InvalidResponse { index: usize, value: f64 },
    #[error("degenerate response: {0}")]
    DegenerateResponse(&'static str),
    #[error("{n} observations cannot identify {k} parameters")]
    TooFewObservations { n: usize, k: usize },
    #[error("log-likelihood is -inf at the requested point")]
    InfiniteLoglik,
    #[error("probability must lie strictly inside (0, 1); got {0}")]
    InvalidProbability(f64),
    #[error("confidence level must lie strictly inside (0, 1); got {0}")]
    InvalidLevel(f64),
    #[error("standard errors unavailable: {0}")]
    InvalidAse(&'static str),
    #[error("per-observation log-likelihood lengths differ from n = {n}: {a} vs {b}")]
    LoglikLengthMismatch { a: usize, b: usize, n: usize },
    #[error("log-likelihood ratios have zero variance but nonzero mean")]
    DegenerateLikelihoodRatio,
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("{0}")]
    Cli(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
