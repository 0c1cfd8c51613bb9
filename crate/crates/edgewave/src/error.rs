//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the library. Numerical borderline cases are surfaced
/// as errors rather than silently resolved.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An index pair (degree, order) is out of range.
    #[error("index error: {0}")]
    Index(String),
    /// Adaptive or refined quadrature did not reach its tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    /// A singular value sits within a factor 10 of the rank threshold.
    #[error(
        "numerical rank ambiguous at order {n}: singular value ratio {ratio:e} lies within a factor 10 of tolerance {tol:e}"
    )]
    RankAmbiguity { n: usize, ratio: f64, tol: f64 },
    /// The boundary-type pairing is not covered (PEC–PEC, PMC–PMC, swapped faces).
    #[error("unsupported boundary pairing: {0}")]
    UnsupportedPairing(String),
    /// Operation requested for a case kind it is not defined for.
    #[error("case error: {0}")]
    Case(String),
    /// A least-squares fit was too poor to trust (coefficient of determination).
    #[error("fit residual too large: R^2 = {0}")]
    FitResidual(f64),
    /// Richardson extrapolation disagreed with its lower-order estimate.
    #[error("extrapolation unstable: {0}")]
    Extrapolation(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Evaluation requested at a singular point of a representation.
    #[error("singular point: {0}")]
    SingularPoint(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
