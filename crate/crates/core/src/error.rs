use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("non-physical covariance (n = {n}, m = {m}, c = {c}): {reason}")]
    NonPhysical {
        n: f64,
        m: f64,
        c: f64,
        reason: &'static str,
    },

    /// `c = 0`: the asymmetry gain and everything built on it is undefined.
    #[error("uncorrelated state (c = {c}): asymmetry gain undefined")]
    Uncorrelated { c: f64 },

    #[error("objective not finite at x = {x}")]
    NonFiniteEvaluation { x: f64 },

    #[error("invalid search interval [{lo}, {hi}] with tol {tol}")]
    InvalidInterval { lo: f64, hi: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
