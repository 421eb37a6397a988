use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {name} = {value} (expected {expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("non-finite value in {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("Newton iteration failed to converge at t = {t} after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence {
        t: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("singular iteration matrix at t = {t}")]
    SingularMatrix { t: f64 },

    #[error(
        "quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}"
    )]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("orientation matrix is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("linear solve failed: relative residual {residual:e} (tolerance {tolerance:e})")]
    LinearSolve { residual: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
