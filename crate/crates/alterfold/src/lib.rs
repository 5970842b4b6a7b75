//! Text formats, parallel drivers and the command-line interface on top of
//! the `alterfold-core` engine.

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod refs;
pub mod report;

pub use alterfold_core;

/// Errors of the std layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed command line or reference.
    #[error("{0}")]
    Usage(String),
    /// An input file or name that does not describe valid data.
    #[error("invalid input: {0}")]
    Input(alterfold_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A computation on valid inputs that failed.
    #[error("computation failed: {0}")]
    Compute(#[from] alterfold_core::Error),
}

impl Error {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Compute(_) => 1,
            _ => 2,
        }
    }
}
