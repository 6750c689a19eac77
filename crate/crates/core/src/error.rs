use thiserror::Error;

/// Errors raised by the state, divergence, solver and geometry kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector lies outside the unit ball (radius {radius})")]
    OutOfBall { radius: f64 },

    #[error("non-finite Bloch vector component")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("reference state is (numerically) pure, radius {radius}; divergence is unbounded")]
    SingularReference { radius: f64 },

    #[error("gradient diverges at pure state (radius {radius})")]
    SingularGradient { radius: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("pulse sequence too short: {len} pulses, need at least 2")]
    TooShort { len: usize },

    #[error("phase {value} at position {index} is neither 0 nor pi")]
    InvalidPhase { index: usize, value: f64 },

    #[error("site {index} is a pure state (radius {radius}); enclosing balls need mixed sites")]
    PureSite { index: usize, radius: f64 },

    #[error("site {index} has a negative or non-finite ball radius {radius}")]
    InvalidSiteRadius { index: usize, radius: f64 },

    #[error("{n} sites exceed the brute-force limit of {max}")]
    TooManySites { n: usize, max: usize },

    #[error("{n} surface samples is below the minimum of {min}")]
    Undersampled { n: usize, min: usize },

    #[error("bisector undefined for coincident centers")]
    DegenerateBisector,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
