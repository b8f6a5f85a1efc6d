use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown model kind `{0}`")]
    UnknownModel(String),

    #[error("argument {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("input is not monotone: {0}")]
    NonMonotone(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("explicit step dt={dt} exceeds stability bound {bound}")]
    Cfl { dt: f64, bound: f64 },

    #[error("non-finite value at t={time} (index {index})")]
    NonFinite { time: f64, index: usize },

    #[error("no stationary family: {0}")]
    NoStationaryFamily(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("monotonicity lost at t={time}: {detail}")]
    MonotonicityLost { time: f64, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
