//! Error taxonomy shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the solver, the factorization
/// kernels, and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes that do not conform (e.g. X and B with different sizes).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A value-level precondition was violated (non-PSD input, epsilon <= 0, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A NaN or infinity reached a solver entry point.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// An iterative factorization kernel did not converge.
    #[error("factorization of a {rows}x{cols} matrix failed: {detail}")]
    Factorization {
        rows: usize,
        cols: usize,
        detail: String,
    },

    /// The problem instance carries no information (e.g. X numerically zero
    /// where a nonzero X is required).
    #[error("degenerate problem: {0}")]
    Degenerate(String),

    /// Malformed input file; `line` is 1-based.
    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    /// Underlying I/O failure, annotated with the path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A documented limitation was hit (e.g. complex solves need n >= m).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors callers caused by handing in malformed *input text or
    /// arguments* (as opposed to solver-level failures). The CLI maps these
    /// to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Argument(_))
    }
}
