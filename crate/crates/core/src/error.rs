use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("quadrature failure: estimate {estimate:e}, error estimate {error:e} after {evaluations} evaluations")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("sector condition violated at x = {x}, xi = {xi}: Re p = 0 but Im p = {im}")]
    SectorViolated { x: f64, xi: f64, im: f64 },

    #[error("sector constant {0} is not below 1")]
    SectorTooLarge(f64),

    #[error("degenerate measure: ball infimum of the maximal symbol vanishes at x = {x}, R = {radius}")]
    DegenerateMeasure { x: f64, radius: f64 },

    #[error("rho = {rho} is out of range (u(x, 1) = {max})")]
    RhoOutOfRange { rho: f64, max: f64 },

    #[error("argument {arg} outside the domain of {what}")]
    Domain { what: &'static str, arg: f64 },

    #[error("iterated log undefined: level {level} of t = {t} is not above 1")]
    IteratedLogUndefined { t: f64, level: usize },

    #[error("inverse undefined: maximal symbol is not strictly increasing past xi = 1 (stalled at xi = {xi})")]
    InverseUndefined { xi: f64 },

    #[error("{0} applies to Levy processes only (state-independent triplet required)")]
    LevyOnly(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integrand evaluation failed in block {block}: {source}")]
    Block {
        block: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("time {0} is not a recorded grid time")]
    TimeNotOnGrid(f64),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("scenario schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("i/o: {0}")]
    Io(String),

    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    /// Input errors (schema and specification problems) as opposed to
    /// numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Schema { .. } | Error::InvalidSpec(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
