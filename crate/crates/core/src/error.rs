use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("ball centered at {center} with radius {radius} escapes the domain [-{half_width}, {half_width}]^2")]
    BallOutsideDomain {
        center: num_complex::Complex64,
        radius: f64,
        half_width: f64,
    },

    #[error("field does not live on the grid of this operator (support violation)")]
    SupportViolation,

    #[error("invalid Beltrami coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("evaluation point {0} is closer to the real line than the line spacing")]
    TooCloseToLine(num_complex::Complex64),

    #[error("iteration did not converge after {iterations} steps (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("degenerate curve: {0}")]
    Degenerate(String),

    #[error("boundary map is not strictly increasing at sample {0}")]
    NonMonotone(usize),

    #[error("evaluator returned a non-finite value at {0}")]
    Evaluator(num_complex::Complex64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
