//! Group elements: the real Heisenberg group, Sp(n,ℝ), the Jacobi group and
//! its disk-model counterpart, the complex Heisenberg group, and the map Θ
//! relating the two models.

mod complex;
mod heisenberg;
mod jacobi;
pub mod random;
mod star;
mod symplectic;
mod theta;

pub use complex::{ComplexHeisenbergElement, ComplexJacobiElement, HarishChandra};
pub use heisenberg::HeisenbergElement;
pub use jacobi::JacobiElement;
pub use random::{random_jacobi, random_jacobi_star};
pub use star::{GStarElement, JacobiStarElement};
pub use symplectic::{j_matrix, symplectic_defect, SpElement};
pub use theta::{conjugate_embedding, t_star, t_star_inv, theta_conjugation_residual, theta_inv, theta_map};

use crate::cmatrix::Matrix;
use crate::scalar::{Real, Scalar};

/// `base·(1 + scale)`, rescaled to the precision of `T`. Products of group
/// elements grow, so fixed absolute thresholds would reject valid elements.
pub(crate) fn rel_tol<T: Real>(base: f64, scale: T) -> T {
    T::tol(base) * (T::one() + scale)
}

pub(crate) fn check_shape<S: Scalar>(name: &str, m: &Matrix<S>, rows: usize, cols: usize) -> Result<(), String> {
    if m.shape() != (rows, cols) || rows == 0 || cols == 0 {
        return Err(format!("{name} has shape {:?}, expected ({rows}, {cols})", m.shape()));
    }
    if !m.is_finite() {
        return Err(format!("{name} has non-finite entries"));
    }
    Ok(())
}
