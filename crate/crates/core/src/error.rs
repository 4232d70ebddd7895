use thiserror::Error;

/// Every failure the engine can report.
///
/// The CLI maps variants onto exit codes; the message carries the detail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input: rationals, divisor specs, flag specs, JSON.
    #[error("parse error: {0}")]
    Parse(String),

    /// A model, flag or point spec breaks one of its structural invariants.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An operation was called outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadratic with negative discriminant was asked for a real root.
    #[error("no real root: discriminant {0} is negative")]
    NoRealRoot(String),

    /// The Zariski iteration could not produce a valid decomposition.
    #[error("not pseudoeffective in model: {0}")]
    NotPseudoeffective(String),

    /// The declared curve data contradicts what the path tracer observes.
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// `k^2 - k(C^2 - 1)` vanishes, so the tower closed forms are undefined.
    #[error("degenerate tower: {0}")]
    DegenerateTower(String),
}

pub type Result<T> = std::result::Result<T, Error>;
