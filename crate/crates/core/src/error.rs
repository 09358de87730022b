use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {arg} outside the domain ({reason})")]
    Domain {
        func: &'static str,
        arg: f64,
        reason: &'static str,
    },
    #[error("{func}: argument {arg} beyond the supported range (|x| <= {cap})")]
    Range {
        func: &'static str,
        arg: f64,
        cap: f64,
    },
    #[error("quadrature did not converge: estimated error {est_error:e} > tolerance {tol:e} after {evaluations} evaluations")]
    NonConvergence {
        est_error: f64,
        tol: f64,
        evaluations: usize,
    },
    #[error("integrand returned a non-finite value at t = {at}")]
    NonFinite { at: f64 },
    #[error("difference quotient diverges near x = {at}; the function is not Lipschitz there")]
    NonLipschitz { at: f64 },
    #[error("Hankel moment matrix not positive definite at order {order}")]
    Conditioning { order: usize },
    #[error("need {needed} moments, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("requested {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("unknown density '{0}'")]
    UnknownDensity(String),
    #[error("density '{0}' is not reducible")]
    NotReducible(String),
    #[error("density '{density}' lacks {what}")]
    MissingData {
        density: String,
        what: &'static str,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
