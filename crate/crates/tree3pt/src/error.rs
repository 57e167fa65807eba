use num_complex::Complex64;
use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("pole at expansion point: |c| = {0:e}")]
    PoleAtExpansionPoint(f64),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        best: Vec<Complex64>,
        residual: f64,
        iterations: usize,
    },
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("coincident rapidities: {0}")]
    CoincidentRapidities(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("colliding roots: separation {0:e}")]
    CollidingRoots(f64),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("unverified roots: Bethe residual {0:e}")]
    UnverifiedRoots(f64),
    #[error("parse error at offset {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("wrong sector: {0}")]
    WrongSector(String),
}

impl Error {
    /// Stable variant name, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::PoleAtExpansionPoint(_) => "PoleAtExpansionPoint",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SingularJacobian => "SingularJacobian",
            Error::CoincidentRapidities(_) => "CoincidentRapidities",
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::CollidingRoots(_) => "CollidingRoots",
            Error::TooLarge(_) => "TooLarge",
            Error::UnverifiedRoots(_) => "UnverifiedRoots",
            Error::ParseError { .. } => "ParseError",
            Error::WrongSector(_) => "WrongSector",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
