use thiserror::Error;

pub type Result<T> = std::result::Result<T, ThetaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The largest term of the series exceeds the budget; the partial sum would be
    /// dominated by rounding error.
    #[error("infeasible cancellation: peak log-term {peak_log:.3} exceeds budget {budget:.3}")]
    InfeasibleCancellation { peak_log: f64, budget: f64 },

    #[error("series not truncated within {max_terms} terms")]
    TermLimit { max_terms: usize },

    #[error("point is within {distance:e} of the spiral; contour evaluation refused")]
    MarginTooSmall { distance: f64 },

    #[error("quadrature did not converge: {panels} panels, error estimate {error_estimate:e}")]
    NonConvergence { panels: usize, error_estimate: f64 },

    #[error("no rotation angle reaches margin {required:e} (best {best:e})")]
    NoValidAngle { best: f64, required: f64 },

    #[error("index set Z1 is empty; no growth envelope")]
    EmptyZ1,

    #[error("overflow in {op}")]
    Overflow { op: &'static str },
}

impl ThetaError {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        ThetaError::Domain {
            op,
            reason: reason.into(),
        }
    }
}
