use thiserror::Error;

/// Failures reported by the physics modules.
///
/// Variants split into two families: input that violates a precondition
/// (`is_validation() == true`) and runtime aborts of an otherwise valid run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("formalism derived without loss: gamma must be 0 (got {gamma})")]
    LossNotSupported { gamma: f64 },

    #[error("quadrature did not converge: estimated error {achieved:.3e} > target {target:.3e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("perfect-mirror divergence: |t(k0)| = 0, evaluate with a finite bandwidth instead")]
    PerfectMirrorDivergence,

    #[error("no doublet found: transmission has fewer than two extinction maxima")]
    NoDoublet,

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("norm drift {drift:.3e} after {steps} steps exceeds budget {budget:.3e}")]
    NormDrift { drift: f64, steps: usize, budget: f64 },

    #[error("wavepacket reached the lattice boundary (edge weight {edge_weight:.3e})")]
    BoundaryHit { edge_weight: f64 },

    #[error("step size {step:.3e} exceeds the stability/accuracy limit {limit:.3e}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("coordinate {value} lies outside the grid [{min}, {max}]")]
    OutOfGrid { value: f64, min: f64, max: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Precondition(_)
                | Error::LossNotSupported { .. }
                | Error::OutOfGrid { .. }
                | Error::StepTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value < 0.0 {
        return Err(Error::invalid(name, format!("must be >= 0, got {value}")));
    }
    Ok(value)
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::invalid(name, format!("must be > 0, got {value}")));
    }
    Ok(value)
}
