use std::path::PathBuf;

/// Errors raised by the numerical kernels, solvers and file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vorticity has nonzero mean {mean:e}; a periodic domain cannot absorb net circulation")]
    NonZeroMean { mean: f64 },

    #[error("malformed field: {0}")]
    MalformedField(String),

    #[error("CFL violation: dt = {dt:e} exceeds limit {limit:e} (max velocity {max_speed:e}, spacing {spacing:e})")]
    Cfl {
        dt: f64,
        limit: f64,
        max_speed: f64,
        spacing: f64,
    },

    #[error("degenerate contour: chord-arc ratio {chord_arc:e} below floor {floor:e}")]
    DegenerateContour { chord_arc: f64, floor: f64 },

    #[error("contour self-intersects at t = {t}")]
    SelfIntersection { t: f64 },

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("evaluation box too small: {0}")]
    BoxTooSmall(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("simulation failed at alpha = {alpha}, step {step}: {source}")]
    Simulation {
        alpha: f64,
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: bad format: {message}")]
    Format { path: PathBuf, message: String },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Schema,
    Numerical,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidConfig(_) | Error::Format { .. } => ErrorClass::Schema,
            Error::Io { .. } => ErrorClass::Io,
            Error::Simulation { source, .. } => source.class(),
            _ => ErrorClass::Numerical,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
