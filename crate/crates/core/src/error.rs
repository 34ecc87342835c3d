use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("xi = {xi} is within {tol:e} of the critical value {critical}")]
    BoundaryXi { xi: f64, critical: f64, tol: f64 },
    #[error("initial data does not decay: |u0(+-L)| = {edge:e} exceeds {bound:e}")]
    DecayViolation { edge: f64, bound: f64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("pole {index} has |Im theta| = {value:e} on the threshold {delta0:e}")]
    ThresholdCollision { index: usize, value: f64, delta0: f64 },
    #[error("singular soliton system (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },
    #[error("evaluation at a pole: {0}")]
    PoleEvaluation(String),
    #[error("pole {pole} is within {tol} of z = i")]
    PoleTooCloseToI { pole: String, tol: f64 },
    #[error("Gamma has a pole at {0}")]
    PoleOfGamma(String),
    #[error("argument {0} outside the evaluation envelope")]
    EnvelopeExceeded(String),
    #[error("M(xi_k) is numerically singular (det = {det:e})")]
    SingularM { det: f64 },
    #[error("blow-up: max|u| = {max:e} exceeds {limit:e} at t = {t}")]
    BlowupDetected { max: f64, limit: f64, t: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
