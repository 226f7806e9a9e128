//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by grid construction, operators, solvers and analysis.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter or configuration field violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A stated hypothesis of a closed-form bound or classifier is not met.
    #[error("hypothesis not satisfied: {condition}")]
    HypothesisNotSatisfied { condition: &'static str },

    /// The antiderivative (and anything built on it) requires zero-mean input.
    #[error("zero-mass violation: |mean| = {mean:.3e} exceeds {tol:.3e} * ||f|| = {bound:.3e}")]
    ZeroMassViolation { mean: f64, tol: f64, bound: f64 },

    /// Two fields (or a field and a grid) do not share the same grid.
    #[error("grid mismatch: expected {expected} points, got {actual}")]
    GridMismatch { expected: usize, actual: usize },

    /// The iteration denominator vanished; the profile is degenerate.
    #[error("degenerate profile: stabilizing-factor denominator is numerically zero")]
    DegenerateProfile,

    /// The linear symbol vanishes on a grid mode; the wave speed resonates
    /// with linear modes and the update is singular.
    #[error("profile symbol singular at kappa = {kappa:.6e} (|P| = {value:.3e})")]
    SymbolSingular { kappa: f64, value: f64 },

    /// A field contains non-finite values.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    /// Time stepping produced non-finite values at the given step index.
    #[error("time step {step} failed: solution is no longer finite")]
    StepFailure { step: usize },

    /// The tail window contains too little usable data for a decay fit.
    #[error("decay fit infeasible: {reason}")]
    FitInfeasible { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than numerical failure.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::HypothesisNotSatisfied { .. }
                | Error::GridMismatch { .. }
        )
    }
}
