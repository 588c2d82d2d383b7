use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: i64, len: usize },

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate denominator for forcing base {base}")]
    DegenerateDenominator { base: Complex64 },

    #[error("forcing term with n_power {n_power} is not supported")]
    UnsupportedForcing { n_power: u8 },

    #[error("secular term on unexpected base {base}")]
    UnexpectedSecularBase { base: Complex64 },

    #[error("amplitude overflow at step {step}: |A| = {modulus:e}")]
    AmplitudeOverflow { step: usize, modulus: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0}")]
    WrongKind(String),

    #[error("trajectory diverged at step {step}: |z| = {value:e}")]
    Divergence { step: usize, value: f64 },

    #[error("singular implicit step at index {step}")]
    SingularStep { step: usize },

    #[error("trajectory mismatch: {0}")]
    TrajectoryMismatch(String),

    #[error("too few zero crossings: found {found}, need at least 4")]
    TooFewCrossings { found: usize },

    #[error("too few peaks: found {found}, need at least 2")]
    TooFewPeaks { found: usize },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence { .. }
            | Error::SingularStep { .. }
            | Error::AmplitudeOverflow { .. }
            | Error::DegenerateDenominator { .. }
            | Error::Domain(_) => 3,
            Error::Io(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
