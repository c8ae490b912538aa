use thiserror::Error;

/// Errors raised by wedgekit operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum WedgeError {
    /// Input outside the documented domain (wrong algebra, off-shell point, bad shape).
    #[error("domain error: {0}")]
    Domain(String),
    /// Family, rank or configuration the toolkit does not handle.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A result leaves the span it must stay in.
    #[error("closure error: {0}")]
    Closure(String),
    /// Arithmetic failure: overflow, non-finite values, failed recheck.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Condition number or spectral spread beyond the double precision envelope.
    #[error("conditioning error: {0}")]
    Conditioning(String),
    /// Requested accuracy is outside the validated envelope of a discretization.
    #[error("accuracy envelope exceeded: {0}")]
    Envelope(String),
    /// Eigenprojections or grading law failed to verify.
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, WedgeError>;
