//! Error types shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode the library can surface.
///
/// Each variant maps to one error class reported by the CLI
/// (`Error::class`), so callers and scripts can dispatch on a stable
/// token instead of parsing messages.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operand shapes do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A dimension that must be >= 1 was zero.
    #[error("invalid size: {0}")]
    InvalidSize(String),
    /// A configuration value is out of its documented domain.
    #[error("invalid config: {0}")]
    Config(String),
    /// Input data violates the format's own arithmetic (counts, ranges).
    #[error("bad data: {0}")]
    Data(String),
    /// Wrong magic number or malformed header in a binary stream.
    #[error("bad format: {0}")]
    Format(String),
    /// A binary stream ended before its declared payload.
    #[error("truncated input: {0}")]
    Length(String),
    /// A computation produced NaN/Inf or otherwise left the finite domain.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Iterative method ran out of iterations; carries the last estimate.
    #[error("no convergence after {iters} iterations (last estimate {last})")]
    Convergence { iters: usize, last: f64 },
    /// Structural pruning would leave a layer with zero neurons.
    #[error("degenerate network: {0}")]
    DegenerateNetwork(String),
    /// Correlation of a constant series is undefined.
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),
    /// I/O failure, annotated with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attach a path to a raw `io::Error`.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable class token for exit reporting.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::InvalidSize(_) => "invalid-size",
            Error::Config(_) => "config",
            Error::Data(_) => "data",
            Error::Format(_) => "format",
            Error::Length(_) => "length",
            Error::Numerical(_) => "numerical",
            Error::Convergence { .. } => "convergence",
            Error::DegenerateNetwork(_) => "degenerate-network",
            Error::UndefinedCorrelation(_) => "undefined-correlation",
            Error::Io { .. } => "io",
        }
    }
}
