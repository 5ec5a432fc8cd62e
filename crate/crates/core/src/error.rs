use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its physical or numerical domain.
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    /// The closed-form decay rate only exists for s in {1/2, 1, 3}.
    #[error("no closed-form decay rate for s = {0}; use decay_rate_quadrature")]
    UnsupportedExponent(f64),

    /// Adaptive quadrature or a convergence check did not reach its tolerance.
    #[error("{what}: tolerance {requested:e} not met (achieved {achieved:e})")]
    Accuracy {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// The ODE integrator could not take a step.
    #[error("integrator step size underflow at t = {t}")]
    StepSize { t: f64 },

    /// |p(t)| fell below the amplitude floor, so p'/p is undefined.
    #[error("amplitude underflow at t = {t} (|p| = {magnitude:e})")]
    AmplitudeUnderflow { t: f64, magnitude: f64 },

    /// A matrix handed in as a density matrix is not one.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// No evolution took place, so tau_QSL / tau is 0/0.
    #[error("speed-limit ratio undefined: no evolution over the horizon")]
    UndefinedRatio,

    /// The coupling scan found no Markovian to non-Markovian onset.
    #[error("no onset of non-Markovianity in [{lo}, {hi}]")]
    NotFound {
        lo: f64,
        hi: f64,
        scan: Vec<(f64, f64)>,
    },

    #[error("configuration: {0}")]
    Config(String),

    #[error("validation failed: {check} residual {residual:e} > {tolerance:e}")]
    Validation {
        check: String,
        residual: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            Error::NotFound { .. } => 3,
            Error::Accuracy { .. } | Error::StepSize { .. } | Error::Validation { .. } => 4,
            _ => 1,
        }
    }
}
