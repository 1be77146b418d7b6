use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e} exceeds {tolerance:.1e})")]
    NonHermitianInput { residual: f64, tolerance: f64 },

    #[error("dimension {dim} exceeds the dense cap {cap}; use sector projection or sparse mode")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("invalid lattice parameters: {0}")]
    InvalidParams(String),

    #[error("sector B = {0} is empty")]
    EmptySector(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad state spec {spec:?}: {reason}")]
    BadStateSpec { spec: String, reason: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
