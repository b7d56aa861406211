//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested gamma ratio is genuinely infinite (numerator pole over
    /// a finite denominator) or otherwise outside the supported conventions.
    #[error("gamma pole: {0}")]
    Pole(String),

    /// Arguments violate an operation's domain window.
    #[error("domain error: {0}")]
    Domain(String),

    /// The solvability constant xi vanishes (relative to its own term scale),
    /// so the boundary value problem has no Green's function.
    #[error("singular problem: {0}")]
    SingularProblem(String),

    /// A dense factorization met a pivot below the singularity threshold.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// The sign hypotheses required by the bound theorems do not hold.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// Determinant does not change sign over the bisection bracket.
    #[error("no determinant sign change over bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// A structured text file failed to parse; names the offending field.
    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: msg.into(),
        }
    }
}
