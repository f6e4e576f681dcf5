use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// Variants split into two classes: structural problems (shapes, malformed
/// inputs, incompatible objects) and domain problems (inputs that are well
/// formed but violate a mathematical precondition). See [`Error::is_domain`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has {found} entries, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid measure space: {0}")]
    InvalidSpace(String),

    #[error("non-finite value {value} at point {point} of {what}")]
    NonFinite {
        what: &'static str,
        point: usize,
        value: f64,
    },

    #[error("incompatible objects: {0}")]
    Incompatible(String),

    #[error("not a probability density: {0}")]
    NotDensity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{axiom} failed: {detail}")]
    Axiom { axiom: String, detail: String },

    #[error("overflow evaluating phi at point {point} with argument {arg}")]
    Overflow { point: usize, arg: f64 },

    #[error("density outside the family: {0}")]
    OutsideFamily(String),

    #[error("{what} did not converge after {iterations} iterations (last bracket [{lo}, {hi}])")]
    Solver {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a violated mathematical precondition rather
    /// than by malformed or mismatched input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotDensity(_)
                | Error::Domain(_)
                | Error::Axiom { .. }
                | Error::Overflow { .. }
                | Error::OutsideFamily(_)
                | Error::Solver { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
