//! Scalar abstractions shared by the matrix kernel and everything above it.
//!
//! [`Real`] is the field of real scalars (`f32` or `f64`); [`Scalar`] is
//! anything a [`Matrix`](crate::cmatrix::Matrix) can hold, i.e. a real or a
//! `Complex<Real>`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the geometry is evaluated in.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance stated for double precision, rescaled so it asks for the
    /// same fraction of this type's significant digits. Identity for `f64`;
    /// `1e-10` becomes roughly `4e-5` for `f32`.
    fn tol(x: f64) -> Self {
        let eps = Self::epsilon().to_f64().unwrap_or(f64::EPSILON);
        let power = (eps.ln() / f64::EPSILON.ln()).min(1.0);
        Self::lit(x.powf(power))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Entry type of a dense matrix: either a real number or a complex number
/// over a [`Real`].
pub trait Scalar:
    Copy + PartialEq + Debug + Default + NumAssign + Neg<Output = Self> + Sum + Send + Sync + 'static
{
    type Real: Real;

    fn from_real(r: Self::Real) -> Self;
    /// `None` when `im != 0` and the type cannot carry an imaginary part.
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self>;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    fn modulus(self) -> Self::Real;
    fn is_finite(self) -> bool;
}

impl<T: Real> Scalar for T {
    type Real = T;

    fn from_real(r: T) -> Self {
        r
    }

    fn from_parts(re: T, im: T) -> Option<Self> {
        if im == T::zero() {
            Some(re)
        } else {
            None
        }
    }

    fn re(self) -> T {
        self
    }

    fn im(self) -> T {
        T::zero()
    }

    fn conj(self) -> Self {
        self
    }

    fn modulus(self) -> T {
        self.abs()
    }

    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
}

impl<T: Real> Scalar for Complex<T> {
    type Real = T;

    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }

    fn from_parts(re: T, im: T) -> Option<Self> {
        Some(Complex::new(re, im))
    }

    fn re(self) -> T {
        self.re
    }

    fn im(self) -> T {
        self.im
    }

    fn conj(self) -> Self {
        Complex::conj(&self)
    }

    fn modulus(self) -> T {
        self.norm()
    }

    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// The imaginary unit over `T`.
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}
