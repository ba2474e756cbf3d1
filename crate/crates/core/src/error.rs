use thiserror::Error;

/// Errors raised by parameter validation, closed-form evaluation and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` out of range: {value} (expected {expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: String,
    },

    #[error("coupling parameter r={r} outside the admissible region [{lo}, {hi}]")]
    OutOfRegion { r: f64, lo: f64, hi: f64 },

    #[error("requested {requested} atoms exceeds the atom budget of {budget}")]
    ResourceLimit { requested: u128, budget: usize },

    #[error("evaluation at the pole r={pole}")]
    PoleEvaluation { pole: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("measure not normalized: total mass {sum}")]
    NotNormalized { sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: impl Into<String>) -> Self {
        Error::OutOfRange {
            name,
            value,
            expected: expected.into(),
        }
    }

    /// Name of the offending parameter, when the error is tied to one.
    pub fn parameter(&self) -> Option<&'static str> {
        match self {
            Error::OutOfRange { name, .. } => Some(name),
            Error::OutOfRegion { .. } => Some("r"),
            _ => None,
        }
    }
}
