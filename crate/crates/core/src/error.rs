use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {abs_error:e} after {subdivisions} subdivisions ({reason})"
    )]
    NonConvergence {
        value: f64,
        abs_error: f64,
        subdivisions: usize,
        reason: String,
    },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("support is unbounded, the limit is +inf")]
    UnboundedSupport,

    #[error("normalizer is zero or not finite: {0:e}")]
    DegenerateNormalizer(f64),

    #[error("function is not strictly increasing: {0}")]
    Monotonicity(String),

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("weight has no antiderivative and cumulative quadrature failed: {0}")]
    WeightAntiderivativeUnavailable(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
