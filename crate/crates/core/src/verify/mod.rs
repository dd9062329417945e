//! Numerical checks of the group laws, actions, invariant metrics and
//! Laplacians, each producing a reproducible [`CheckReport`].
//!
//! Every check compares two independently computed quantities: a closed
//! form against a finite difference, an operator against Laplace–Beltrami
//! from the metric tensor, or both sides of an invariance identity.

mod checks;
mod closed;
mod lb;
mod pushforward;
mod report;

pub use checks::{default_tol, rel_residual, run_check, run_default, CHECK_NAMES, MAX_RETRIES};
pub use closed::{laplacian_11, quarter_metric_11};
pub use lb::{laplace_beltrami, laplace_beltrami_of};
pub use pushforward::{pushforward, pushforward_map, GroupAction};
pub use report::{fmt15, CheckReport, PartReport};
