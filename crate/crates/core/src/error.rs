use thiserror::Error;

/// Errors raised by the solvers, the tracking engine and the scenario loader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Lax curve leaves the admissible pressure range: {0}")]
    CurveDomain(String),

    #[error("Riemann problem has no admissible solution: {0}")]
    NoSolution(String),

    #[error("root finder did not converge: {0}")]
    NoConvergence(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("interaction cap of {cap} events exceeded at t = {time} (accumulation suspected)")]
    AccumulationSuspected { cap: usize, time: f64 },

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
