use thiserror::Error;

/// Errors raised by the sensing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Array parameters outside their valid domain (N = 0, non-positive spacing, ...).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// The target coincides with an antenna, so distance gradients are undefined.
    #[error("degenerate geometry: target coincides with antenna {antenna}")]
    DegenerateGeometry { antenna: usize },

    /// OFDM or scenario parameters outside their valid domain.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The Fisher information is singular, so the parameters are not jointly identifiable.
    #[error("singular Fisher information: {0}")]
    SingularInformation(String),

    /// A closed-form expression was evaluated outside the domain it was derived for.
    #[error("domain error: {0}")]
    Domain(String),

    /// Array dimensions of a frame do not agree with the scenario.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A dataset lacks a column that a plot script needs.
    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True when the request itself was wrong (bad parameters, configuration
    /// or input file) rather than the computation failing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidGeometry(_) | Error::InvalidConfig(_) | Error::MissingColumn(_) | Error::DimensionMismatch(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
