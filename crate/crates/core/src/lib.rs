//! Numerics for the Jacobi group acting on the Siegel–Jacobi space
//! `H_{n,m} = H_n × ℂ^(m,n)` and on the Siegel–Jacobi disk `D_{n,m}`:
//! group laws, the partial Cayley transform relating the two models, the
//! invariant Riemannian metrics, their Laplacians, and numerical checks of
//! all invariance claims.
//!
//! Matrix, group, geometry and metric code is generic over the real scalar
//! ([`Real`]: `f32` or `f64`). Differential operators and the verification
//! suites are tuned finite-difference code and run in `f64` only.

// `!(x <= tol)` is deliberate throughout: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cmatrix;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod metrics;
pub mod operators;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Double-precision complex matrix, the carrier of Ω, Z, W, η and friends.
pub type ComplexMatrix = cmatrix::CMatrix<f64>;
pub type RealMatrix = cmatrix::RMatrix<f64>;
pub type Complex64 = num_complex::Complex<f64>;
