//! Error types shared across the crate.
//!
//! The CLI maps these onto exit codes: configuration and usage errors exit
//! with 2, numerical failures (blow-up, non-convergence, quadrature stall)
//! with 1.

use crate::evolution::Diagnostics;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters, malformed config files, domain violations.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with an argument in the wrong representation
    /// (e.g. a frequency-space field where physical space is required).
    #[error("usage error: {0}")]
    Usage(String),

    /// Numerical failure: non-convergence, quadrature stall, collapse.
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// NaN/Inf detected during time evolution. Carries the step index and
    /// the diagnostics recorded up to the last healthy sample.
    #[error("non-finite state at step {step} (t = {t}); last good sample at t = {last_good_t}")]
    Blowup {
        step: usize,
        t: f64,
        last_good_t: f64,
        diagnostics: Box<Diagnostics>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed or mismatched checkpoint/config file contents.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 0 success, 1 numerical failure, 2 config error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::Format(_) => 2,
            Error::Numerics(_) | Error::Blowup { .. } => 1,
            Error::Io(_) => 2,
        }
    }
}
