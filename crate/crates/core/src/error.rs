use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data has {len} entries, expected {expected}")]
    BadShape { len: usize, expected: usize },

    #[error("subsystem dimensions {dims:?} do not multiply to {dim}")]
    SubsystemMismatch { dims: Vec<usize>, dim: usize },

    #[error("invalid subsystem selection {indices:?} for {count} subsystems")]
    InvalidSubsystem { indices: Vec<usize>, count: usize },

    #[error("not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("positivity violated (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge at t = {time}: order {order} vs {doubled} differ by {deviation:e}")]
    Convergence {
        time: f64,
        order: usize,
        doubled: usize,
        deviation: f64,
    },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
