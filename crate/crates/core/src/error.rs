use thiserror::Error;

/// Errors raised by the numerical kernels and the scene/run plumbing.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Argument inside the domain but outside the floating-point safe range.
    #[error("range error: {0}")]
    Range(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Source support touches or crosses the boundary.
    #[error("geometry violation: {0}")]
    Geometry(String),
    /// A numerical accuracy target could not be met.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// Kernel evaluated at a point inside the source support.
    #[error("singular kernel: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ill-conditioned: {0}")]
    Conditioning(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::Config(_) => "config",
            Error::Geometry(_) => "geometry",
            Error::Accuracy(_) => "accuracy",
            Error::Singular(_) => "singular",
            Error::Unsupported(_) => "unsupported",
            Error::Conditioning(_) => "conditioning",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
