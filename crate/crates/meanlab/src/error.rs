use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pair ({a}, {b}): both entries must be positive finite reals")]
    InvalidPair { a: f64, b: f64 },

    #[error("invalid tolerance (abs={abs}, rel={rel}): both must be nonnegative and not both zero")]
    InvalidTolerance { abs: f64, rel: f64 },

    #[error("quadrature did not converge: value {value:e}, error bound {error_bound:e} after {evaluations} evaluations")]
    NoConvergence {
        value: f64,
        error_bound: f64,
        evaluations: u64,
    },

    #[error("argument outside the mean's domain: {0}")]
    Domain(String),

    #[error("weight mean is zero; the scaled transform divides by it")]
    ZeroWeightMean,

    #[error("not a mean function: {0}")]
    NotAMean(String),

    #[error("selector constraint violated: {0}")]
    Selector(String),

    #[error("unknown expression id '{0}'")]
    UnknownExpression(String),

    #[error("precision of {requested} decimal digits outside supported range [{min}, {max}]")]
    Precision { requested: u32, min: u32, max: u32 },

    #[error("negative shift constant c = {0}")]
    NegativeShift(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
