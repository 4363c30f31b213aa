use thiserror::Error;

/// Errors produced by kernel construction, the Volterra solver and the
/// discrete-bath oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violated a domain precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two sampled quantities do not live on compatible time grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Panel refinement stopped before reaching the requested tolerance.
    #[error(
        "quadrature failure: error estimate {achieved:.3e} exceeds the target {required:.3e}"
    )]
    QuadratureFailure { achieved: f64, required: f64 },

    /// A kernel with the wrong thermal weight was passed to an observable
    /// formula.
    #[error("kernel kind mismatch: expected {expected}, found {found}")]
    KernelKindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    /// The Bose weight diverges at zero frequency, so the window must start
    /// strictly above it whenever the spectral density is nonzero there.
    #[error("infrared divergence: the Bose-weighted kernel requires omega_min > 0")]
    InfraredDivergence,

    /// The propagation step cannot resolve the fastest reservoir mode.
    #[error("propagation step too large: dt * omega_fast = {0:.3} exceeds the bound 0.1")]
    StepTooLarge(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
