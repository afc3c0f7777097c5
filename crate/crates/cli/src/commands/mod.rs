//! Subcommand implementations. Each builds a [`crate::report::Report`];
//! rendering, output routing, and exit codes stay in the crate root.

pub mod measures;
pub mod tables;
pub mod turng;
pub mod verify;

/// Tail tolerance shared by every command that folds or truncates a
/// distribution: small enough that certified half-widths sit well
/// under the tightest reported tolerance (1e-10), large enough to
/// keep unbounded supports short.
pub const TAIL_TOLERANCE: f64 = 1e-12;
