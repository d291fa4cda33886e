//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ZetaError>;

#[derive(Debug, Error)]
pub enum ZetaError {
    /// A loop or repeated edge was supplied where a simple graph is required.
    #[error("not a simple graph: {0}")]
    Simplicity(String),

    /// The graph (or realized window) is not connected.
    #[error("graph is not connected: {0}")]
    Connectivity(String),

    /// An enumeration or construction exceeded its combinatorial budget.
    #[error("combinatorial budget exceeded: needed about {needed}, limit {limit}")]
    BudgetExceeded { needed: u64, limit: u64 },

    /// A windowed operator cannot guarantee exact entries at the requested
    /// propagation.
    #[error("window too small: propagation {requested} exceeds exact margin {margin}")]
    WindowTooSmall { requested: usize, margin: usize },

    /// Evaluation requested outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operator pencil is singular (or nearly so) along the branch path.
    #[error("singular pencil at {at}")]
    SingularPencil { at: String },

    /// The convex hull of the spectrum contains zero and no path was given to
    /// fix a branch.
    #[error("convex hull of spectrum contains zero; supply a path to fix the branch")]
    ConvexHullViolation,

    /// A quadrature integrand has a singularity on the integration support.
    #[error("singular integrand: {0}")]
    SingularIntegrand(String),

    /// Supplied boundary data disagrees with the spectral distribution it is
    /// supposed to extend.
    #[error("analyticity violation: {0}")]
    AnalyticityViolation(String),

    /// A constructor parameter is outside its valid range.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// The group action specified for a periodic graph is not free.
    #[error("action is not free: {0}")]
    Freeness(String),

    /// A cycle does not fit in the realized portion of an exhaustion.
    #[error("cycle too large for the realized exhaustion level")]
    CycleTooLarge,

    /// Two internal computation routes that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ZetaError {
    /// CLI exit code: 2 for domain errors, 3 for budget errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ZetaError::Domain(_) => 2,
            ZetaError::BudgetExceeded { .. } => 3,
            _ => 1,
        }
    }
}
