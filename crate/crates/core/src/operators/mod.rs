//! Finite-difference Wirtinger calculus on chart coordinates and the
//! invariant second-order operators of the four domains.
//!
//! Operators are assembled as coefficient matrices over the Wirtinger
//! symbols at a point, then contracted with numerically computed second
//! derivatives of the field.

mod fd;
mod field;
mod laplacians;
mod symbol;

pub use fd::{
    check_margin, complex_coord, complex_dim, first_step, gradient, gradient_richardson, hessian, hessian_richardson,
    point_scale, second_step, wirtinger_bundle, wirtinger_bundle_richardson, wirtinger_hessian, DerivativeBundle,
    WirtingerHessian,
};
pub use field::{field_by_id, test_field_suite, ScalarField};
pub use laplacians::{lap_disk, lap_disk_n, lap_siegel, lap_upper, op_invariant, OpKind, Operator, Reading};
pub use symbol::{LinOp, QuadOp, Symbol};
