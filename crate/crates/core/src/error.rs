use thiserror::Error;

/// Errors raised by the solver, diagnostics and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field evaluation produced NaN or infinity.
    #[error("non-finite evaluation {value} at t={t}, x={x}")]
    Evaluation { t: f64, x: f64, value: f64 },

    /// The state became non-finite during time stepping.
    #[error("non-finite {quantity} in cell {cell} at step {step}")]
    NonFinite {
        step: usize,
        quantity: &'static str,
        cell: usize,
    },

    /// A decay fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),

    /// Adaptive quadrature failed to reach its tolerance.
    #[error("quadrature did not converge on [{lo}, {hi}] (estimate {estimate:e})")]
    Accuracy { lo: f64, hi: f64, estimate: f64 },

    /// Required recorded data is missing.
    #[error("state error: {0}")]
    State(String),

    /// The requested points contain no cell center.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// An inequality check failed.
    #[error("inequality violated: lhs={lhs:e} > bound={bound:e} ({context})")]
    Violation {
        lhs: f64,
        bound: f64,
        context: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
