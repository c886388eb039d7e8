use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A series or continued fraction did not reach the requested tolerance.
    #[error("{what} did not converge within {terms} terms (partial estimate {partial:e})")]
    Convergence {
        what: &'static str,
        terms: usize,
        partial: f64,
    },

    /// Arguments outside the domain of the operation, or outside the parameter
    /// range allowed by the active validity mode.
    #[error("domain error: {0}")]
    Domain(String),

    /// The density ratio does not cross 1 inside the supplied bracket.
    #[error("density ratio does not cross 1 on [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    /// Difference bounds were requested too close to the crossing point.
    #[error("singular denominator at {at}: |1 - r| = {gap:e} is below the crossing tolerance")]
    SingularDenominator { at: f64, gap: f64 },

    /// The small-probability quantile estimator does not apply.
    #[error("quantile bracket unavailable: {0}")]
    BracketUnavailable(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

macro_rules! ensure_domain {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err($crate::Error::Domain(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_domain;
