use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A family or operation parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A real argument lies outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A radius or scale larger than the patch was requested.
    #[error("radius {requested} exceeds patch radius {radius}")]
    OutOfPatch { requested: usize, radius: usize },

    /// Arguments are individually valid but inconsistent with each other.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A walk or kernel left the finite patch.
    #[error("walk left the patch (truncated mass {mass:.3e}); enlarge the patch radius")]
    Truncation { mass: f64 },

    /// The requested finite-size criterion does not apply to the family.
    #[error("criterion error: {0}")]
    Criterion(String),

    /// Influence and Russo estimates are only defined for increasing events.
    #[error("event is not monotone: {0}")]
    NonMonotone(String),

    /// A post-condition that holds by construction failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
