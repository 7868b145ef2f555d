use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The eigensolver ran out of iterations. Carries the best residual
    /// norms reached for each requested state.
    #[error("eigensolver did not converge after {iterations} iterations (best residuals {best_residuals:?})")]
    NoConvergence {
        iterations: usize,
        best_residuals: Vec<f64>,
    },

    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),

    #[error("rank-deficient problem: {0}")]
    RankDeficient(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A failure at one point of a sweep, annotated with the sweep coordinate.
    #[error("at flux {flux}: {source}")]
    AtFlux {
        flux: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
