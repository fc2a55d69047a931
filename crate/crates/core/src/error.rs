//! Error type shared by the whole toolkit.

use thiserror::Error;

/// Toolkit-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong across the toolkit.
///
/// Argument payloads are reported as `f64` regardless of the scalar the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma evaluated at (or within tolerance of) 0, -1, -2, ...
    #[error("gamma pole: {0} is within tolerance of a non-positive integer")]
    NonPositiveIntegerPole(f64),

    /// An argument fell outside an operation's admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mittag-Leffler argument outside the evaluator's supported region.
    #[error("|z| = {z_abs:.3} is outside the Mittag-Leffler evaluation region and no asymptotic branch applies")]
    EvaluationRegionExceeded { z_abs: f64 },

    /// A series failed its stopping criterion within the term cap.
    #[error("series did not meet its stopping criterion within {terms} terms")]
    NonConvergence { terms: usize },

    /// The right-hand side of an IVP produced a non-finite value.
    #[error("right-hand side produced a non-finite value at step {step}")]
    RhsEvaluation { step: usize },

    /// The per-step implicit equation could not be solved.
    #[error("implicit step iteration stalled at step {step}")]
    NonlinearSolveFailure { step: usize },

    /// State magnitude passed the divergence sentinel 1e150.
    #[error("state magnitude exceeded 1e150 at step {step}; trajectory diverged")]
    Overflow { step: usize },

    /// The eigenvalue iteration hit its sweep cap.
    #[error("eigenvalue iteration failed to converge within {iterations} QR sweeps")]
    EigenConvergenceFailure { iterations: usize },

    /// An arc-length function cannot come from a graph curve.
    #[error("arc length inconsistent with a graph curve at node {node}: slope {slope:.6} < 1")]
    InconsistentArcLength { node: usize, slope: f64 },

    /// A grid with non-positive step or no interior nodes.
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    /// The requested combination is refused by the model, not by arithmetic.
    #[error("model restriction: {0}")]
    ModelRestriction(String),
}

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
