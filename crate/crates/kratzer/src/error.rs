use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("argument outside the principal sector: {0}")]
    Branch(String),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("invalid extension parameter: {0}")]
    InvalidExtension(String),
    #[error("solution not available in this range: {0}")]
    InvalidSolution(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("threshold case: {0}")]
    Threshold(String),
    #[error("too close to a pole of the characteristic function at E = {0}")]
    PoleProximity(f64),
    #[error("root bracketing failed: {0}")]
    BracketFailure(String),
    #[error("W = {0} lies on the discrete spectrum")]
    OnSpectrum(String),
    #[error("integrator step failure: {0}")]
    StepFailure(String),
    #[error("numerical overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
