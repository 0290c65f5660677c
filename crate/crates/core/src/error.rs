use thiserror::Error;

/// Failure modes shared by all analysis operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Equilibrium whose linearisation has a zero eigenvalue.
    #[error("non-hyperbolic equilibrium: {0}")]
    NonHyperbolic(String),
    /// Parameters outside the standing assumptions of a classification.
    #[error("out of scope: {0}")]
    OutOfScope(String),
    /// Parameters on a boundary between generic cases.
    #[error("non-generic parameters: {0}")]
    NonGeneric(String),
    /// A genericity quantity vanishes.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Admissibility region of the Hopf chart violated.
    #[error("not admissible: {0}")]
    Admissibility(String),
    /// The requested object does not exist in the search region.
    #[error("not found: {0}")]
    NotFound(String),
    /// Adaptive step size fell below the representable minimum.
    #[error("step size underflow at t = {t} (state u = {u}, v = {v})")]
    Stiffness { t: f64, u: f64, v: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
