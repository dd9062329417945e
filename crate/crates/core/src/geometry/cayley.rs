//! The partial Cayley transform `Φ: D_{n,m} → H_{n,m}` and its differential.

use num_complex::Complex;

use super::actions::{act_disk, act_upper, symmetrized};
use super::points::{DiskPoint, Model, Tangent, UpperPoint};
use crate::cmatrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::groups::{theta_map, JacobiElement};
use crate::scalar::{imag_unit, Real};

/// `Φ(W, η) = (i(I + W)(I − W)⁻¹, 2iη(I − W)⁻¹)`.
pub fn cayley<T: Real>(p: &DiskPoint<T>) -> Result<UpperPoint<T>> {
    let i = imag_unit::<T>();
    let id = CMatrix::identity(p.w.rows());
    let k = (&id - &p.w).inverse()?;
    Ok(UpperPoint {
        omega: symmetrized((&(&id + &p.w) * &k).scale(i))?,
        z: (&p.eta * &k).scale(i * T::lit(2.0)),
    })
}

/// `Φ⁻¹(Ω, Z) = ((Ω − iI)(Ω + iI)⁻¹, Z(Ω + iI)⁻¹)`.
pub fn cayley_inv<T: Real>(p: &UpperPoint<T>) -> Result<DiskPoint<T>> {
    let ii = CMatrix::identity(p.omega.rows()).scale(imag_unit::<T>());
    let k = (&p.omega + &ii).inverse()?;
    Ok(DiskPoint {
        w: symmetrized(&(&p.omega - &ii) * &k)?,
        eta: &p.z * &k,
    })
}

/// `max ‖g·Φ(p) − Φ(Θ(g)·p)‖`, zero when Φ intertwines the two actions.
pub fn check_cayley_compat<T: Real>(g: &JacobiElement<T>, p: &DiskPoint<T>) -> Result<T> {
    let lhs = act_upper(g, &cayley(p)?)?;
    let rhs = cayley(&act_disk(&theta_map(g), p)?)?;
    Ok(lhs.dist(&rhs))
}

/// `Y = Im Ω` and `V = Im Z` at `Φ(W, η)`, expressed in disk coordinates:
/// `Y = (I − W)⁻¹(I − WW̄)(I − W̄)⁻¹`, `V = η(I − W)⁻¹ + η̄(I − W̄)⁻¹`.
pub fn cayley_imaginary_parts<T: Real>(p: &DiskPoint<T>) -> Result<(RMatrix<T>, RMatrix<T>)> {
    let id = CMatrix::identity(p.w.rows());
    let wb = p.w.conj();
    let k = (&id - &p.w).inverse()?;
    let kb = k.conj();
    let y = &(&k * &(&id - &(&p.w * &wb))) * &kb;
    let v = &(&p.eta * &k) + &(&p.eta.conj() * &kb);
    let imag = y.im().max_abs().max(v.im().max_abs());
    let scale = y.max_abs().max(v.max_abs());
    if !(imag <= T::tol(1e-10) * (T::one() + scale)) {
        return Err(Error::NonRealForm {
            real: scale.as_f64(),
            imag: imag.as_f64(),
        });
    }
    Ok((y.re(), v.re()))
}

/// `dΦ_{(W,η)}(dW, dη) = (2i(I−W)⁻¹dW(I−W)⁻¹, 2i{dη + η(I−W)⁻¹dW}(I−W)⁻¹)`.
pub fn cayley_differential<T: Real>(p: &DiskPoint<T>, t: &Tangent<T>) -> Result<Tangent<T>> {
    if t.model != Model::Disk {
        return Err(Error::ModelMismatch("the Cayley differential takes a disk tangent".into()));
    }
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let k = (&CMatrix::identity(p.w.rows()) - &p.w).inverse()?;
    let dmat = (&(&k * &t.dmat) * &k).scale(two_i);
    let inner = &t.dvec + &(&(&p.eta * &k) * &t.dmat);
    Ok(Tangent {
        model: Model::Upper,
        dmat: dmat.symmetric_part(),
        dvec: (&inner * &k).scale(two_i),
    })
}

/// Inverse of [`cayley_differential`], mapping an upper tangent at `Φ(p)`
/// back to the disk.
pub fn cayley_differential_inv<T: Real>(p: &DiskPoint<T>, t: &Tangent<T>) -> Result<Tangent<T>> {
    if t.model != Model::Upper {
        return Err(Error::ModelMismatch("expected an upper tangent".into()));
    }
    let half_over_i = Complex::new(T::zero(), T::lit(-0.5));
    let id = CMatrix::identity(p.w.rows());
    let iw = &id - &p.w;
    let dw = (&(&iw * &t.dmat) * &iw).scale(half_over_i);
    let k = iw.inverse()?;
    let dvec = &(&t.dvec * &iw).scale(half_over_i) - &(&(&p.eta * &k) * &dw);
    Ok(Tangent {
        model: Model::Disk,
        dmat: dw.symmetric_part(),
        dvec,
    })
}
