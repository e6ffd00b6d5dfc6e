use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// `NoExtremal` is a domain outcome rather than a failure: callers that
/// sweep the half-distance across the critical value match on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bracket [{lo}, {hi}] has no sign change (f_lo = {f_lo}, f_hi = {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder exhausted {0} iterations")]
    MaxIterations(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no extremal exists for h = {h} > h* = {h_star}")]
    NoExtremal { h: f64, h_star: f64 },

    #[error("grid mismatch: test function spans {found}, extremal requires {expected}")]
    GridMismatch { expected: f64, found: f64 },

    #[error("perturbed profile is non-positive at t = {t}")]
    ProfileNonPositive { t: f64 },

    #[error("profile has a non-positive sample at index {index}")]
    NonPositiveProfile { index: usize },

    #[error("eigenvalue search failed for mode {k}: {reason}")]
    ConvergenceFailure { k: usize, reason: String },

    #[error("weighted norm below 1e-14; the Rayleigh quotient is undefined")]
    ZeroDenominator,

    #[error("tau = {tau} does not exceed tau* = {tau_star}")]
    NotSupercritical { tau: f64, tau_star: f64 },

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
