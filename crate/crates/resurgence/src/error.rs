//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("valuation too low: need val >= {needed}, got {got}")]
    ValuationTooLow { needed: usize, got: usize },
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("singular point {point} lies on or too close to the integration path")]
    SingularPointOnPath { point: String },
    #[error("z = {z} lies outside the certified domain: {reason}")]
    OutsideDomain { z: String, reason: String },
    #[error("quadrature did not reach the requested tolerance: achieved {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    #[error("Pade construction rejected: relative residual {residual:e} exceeds {limit:e}")]
    PadeRejected { residual: f64, limit: f64 },
    #[error("pole at {point} is not simple (second moment {moment:e})")]
    NonSimplePole { point: String, moment: f64 },
    #[error("least-squares fit is ill-conditioned (condition number {cond:e})")]
    IllConditionedFit { cond: f64 },
    #[error("iteration did not converge within {limit} steps")]
    NonConvergence { limit: usize },
    #[error("nonzero resiter: coefficient of z^-1 in f - id - 1 is {value}")]
    NonzeroResiter { value: String },
    #[error("inversion failure: {0}")]
    InversionFailure(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
    #[error("height consistency check failed: {0}")]
    InconsistentHeights(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
