use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A truncated state or distribution lost too much weight to the cut.
    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("integration failed to converge: {0}")]
    Convergence(String),

    #[error("thermal ensemble exceeds {cap} members")]
    EnsembleExplosion { cap: usize },

    /// An order-2 formula was asked for outside the state class it holds for.
    #[error("formula used outside its validity domain: {0}")]
    Validity(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("degenerate spectral model: {0}")]
    DegenerateModel(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// The separability verdict never flips over the scanned temperatures.
    #[error("no cutoff crossing: condition {} over the whole scan", if *passes { "holds" } else { "fails" })]
    NoCrossing { passes: bool },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoCrossing { .. } => 0,
            Error::Config(_) | Error::InvalidArgument(_) | Error::Io(_) => 2,
            Error::Truncation(_)
            | Error::Validity(_)
            | Error::DimensionMismatch(_)
            | Error::EnsembleExplosion { .. }
            | Error::Convergence(_) => 3,
            Error::DegenerateModel(_) | Error::DegenerateFit(_) | Error::Quadrature(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
