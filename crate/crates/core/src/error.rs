use thiserror::Error;

/// Everything that can go wrong inside the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("separation violation: nodes {i} and {j} differ by {gap:e}, need at least {required:e}")]
    SeparationViolation {
        i: usize,
        j: usize,
        gap: f64,
        required: f64,
    },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("pole violation: x = {x} is a pole or lies on the wrong side")]
    PoleViolation { x: f64 },
    #[error("undefined base: 1 + x[{index}] < 0 raised to a non-integer weight")]
    UndefinedBase { index: usize },
    #[error("ill-defined power: 1 + x[{index}] = 0 raised to a zero weight")]
    IllDefinedZeroPow { index: usize },
    #[error("quadrature failure: error estimate {error:e} above tolerance after {panels} panels")]
    QuadratureFailure { estimate: f64, error: f64, panels: usize },
    #[error("stiff failure: step size {step:e} underflowed at t = {t}, y = {y}")]
    StiffFailure { t: f64, y: f64, step: f64 },
    #[error("sampling exhausted after {rejections} consecutive rejections")]
    SamplingExhausted { rejections: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical method rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailure { .. } | Error::StiffFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
