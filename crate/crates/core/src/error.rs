//! Crate-wide error type.
//!
//! Variants are grouped by how callers are expected to react: invalid
//! parameters and domain violations are caller bugs (CLI exit code 2),
//! resource and numerical failures are environmental or algorithmic
//! limits (CLI exit code 3).

use thiserror::Error;

/// Errors produced by every module in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor parameter violated its documented bounds.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// An operation input lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hard resource cap was reached before the requested tolerance.
    /// `achieved` reports the best value reached at the cap.
    #[error("resource limit: {context} (achieved {achieved:e})")]
    Resource { context: String, achieved: f64 },

    /// An iterative scheme failed to converge or an internal
    /// consistency check failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by caller input (as opposed to resource
    /// or convergence limits). The CLI maps these to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::Domain(_))
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
