use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A transition density was requested at zero elapsed time, where it is a
    /// Dirac measure rather than a function.
    #[error("transition density at t = 0 is a delta measure")]
    DeltaMeasure,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("points coincide (separation {separation:e} below tolerance)")]
    Coincident { separation: f64 },

    #[error("singular denominator in {0}")]
    Singular(&'static str),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// Two routes that must agree by construction disagreed beyond tolerance.
    #[error("{what}: routes disagree (relative error {rel_err:e} > {tol:e})")]
    Inconsistent {
        what: &'static str,
        rel_err: f64,
        tol: f64,
    },

    #[error("ordering violated after {halvings} step halvings at t = {time}")]
    Ordering { halvings: u32, time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
