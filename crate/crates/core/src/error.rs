use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entry ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("unsupported matrix market format: {0}")]
    UnsupportedFormat(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({nrows}x{ncols})")]
    NotSquare { nrows: usize, ncols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("aggregate count {got} outside [1, {max}]")]
    InvalidAggregateCount { got: usize, max: usize },

    #[error("operation requires column-normalized interpolation operators")]
    RequiresNormalized,

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("no sample produced a converged estimate")]
    EmptyEstimate,

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
