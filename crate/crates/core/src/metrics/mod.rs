//! Invariant line elements on H_n, D_n, H_{n,m} and D_{n,m}, evaluated on
//! tangent vectors, and their realization as real metric tensors in the
//! canonical chart.

mod forms;
mod tensor;

pub use forms::{q_disk, q_disk_n, q_siegel, q_upper, DiskForm, UpperForm};
pub use tensor::{metric_tensor, MetricKind, MetricTensor};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The two positive weights `A` (symmetric-matrix part) and `B` (vector part).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams<T: Real> {
    pub a: T,
    pub b: T,
}

impl<T: Real> MetricParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && a.is_finite() && b > T::zero() && b.is_finite()) {
            return Err(Error::InvalidParams(format!("A and B must be positive and finite, got A={a}, B={b}")));
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: T::one(), b: T::one() }
    }
}
