use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value failed structural validation (non-unit vector, non-projector, malformed step function).
    #[error("validation error: {0}")]
    Validation(String),

    /// Tr[rho B] vanishes, so the post-measurement state is undefined.
    #[error("reduction undefined at step {step}: Tr[rho B] = {trace:e}")]
    ReductionUndefined { step: usize, trace: f64 },

    /// mu[b] vanishes, so the classical conditional ratio is undefined.
    #[error("conditional undefined: mu[b] = {measure:e}")]
    ConditionalUndefined { measure: f64 },

    /// The sum-decomposition conflict needs two non-collinear axes.
    #[error("witness undefined: axes are collinear (|n x m| = {cross:e})")]
    WitnessUndefined { cross: f64 },

    #[error("invalid integration order: {0}")]
    InvalidOrder(String),

    #[error("empty measurement history")]
    EmptyHistory,

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    /// A lower-level failure with the scenario that triggered it attached.
    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn in_scenario(self, scenario: &str) -> Error {
        match self {
            e @ Error::Scenario { .. } => e,
            e => Error::Scenario {
                scenario: scenario.to_string(),
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Error {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
