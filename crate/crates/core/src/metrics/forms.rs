use num_complex::Complex;

use super::MetricParams;
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::geometry::{DiskPoint, Model, Tangent, UpperPoint};
use crate::scalar::Real;

fn tr<T: Real>(m: CMatrix<T>) -> Complex<T> {
    m.trace()
}

/// Returns the real part after checking `|Im q| ≤ tol·(1 + |Re q|)`.
fn real_value<T: Real>(q: Complex<T>, tol: f64) -> Result<T> {
    if !(q.im.abs() <= T::tol(tol) * (T::one() + q.re.abs())) {
        return Err(Error::NonRealForm {
            real: q.re.as_f64(),
            imag: q.im.as_f64(),
        });
    }
    Ok(q.re)
}

fn expect_model<T: Real>(t: &Tangent<T>, model: Model) -> Result<()> {
    if t.model != model {
        return Err(Error::ModelMismatch(format!(
            "expected a {} tangent, got {}",
            model.name(),
            t.model.name()
        )));
    }
    Ok(())
}

/// `σ(Y⁻¹ dΩ Y⁻¹ dΩ̄)` from a precomputed `Y⁻¹`.
fn siegel_trace<T: Real>(yinv: &CMatrix<T>, d: &CMatrix<T>) -> Complex<T> {
    tr(&(&(yinv * d) * yinv) * &d.conj())
}

/// `ds² = σ(Y⁻¹ dΩ Y⁻¹ dΩ̄)` on H_n; the vector part of `t` is ignored.
pub fn q_siegel<T: Real>(omega: &CMatrix<T>, t: &Tangent<T>) -> Result<T> {
    expect_model(t, Model::Upper)?;
    let yinv = omega.im().inverse()?.to_complex();
    real_value(siegel_trace(&yinv, &t.dmat), 1e-10)
}

/// `ds² = 4σ((I − WW̄)⁻¹ dW (I − W̄W)⁻¹ dW̄)` on D_n; the vector part of `t`
/// is ignored.
pub fn q_disk_n<T: Real>(w: &CMatrix<T>, t: &Tangent<T>) -> Result<T> {
    expect_model(t, Model::Disk)?;
    let id = CMatrix::identity(w.rows());
    let r1 = (&id - &(w * &w.conj())).inverse()?;
    let r2 = (&id - &(&w.conj() * w)).inverse()?;
    real_value(disk_n_trace(&r1, &r2, &t.dmat), 1e-10)
}

fn disk_n_trace<T: Real>(r1: &CMatrix<T>, r2: &CMatrix<T>, dw: &CMatrix<T>) -> Complex<T> {
    tr(&(&(r1 * dw) * r2) * &dw.conj()).scale(T::lit(4.0))
}

/// The Jacobi-invariant line element on H_{n,m} with weights A, B,
/// with the point-dependent factors precomputed.
#[derive(Clone, Debug)]
pub struct UpperForm<T: Real> {
    yinv: CMatrix<T>,
    v: CMatrix<T>,
    /// `Y⁻¹ ᵗV V Y⁻¹`
    vv: CMatrix<T>,
    params: MetricParams<T>,
}

impl<T: Real> UpperForm<T> {
    pub fn new(p: &UpperPoint<T>, params: MetricParams<T>) -> Result<Self> {
        let yinv = p.y().inverse()?.to_complex();
        let v = p.v().to_complex();
        let vv = &(&(&yinv * &v.transpose()) * &v) * &yinv;
        Ok(Self { yinv, v, vv, params })
    }

    /// Complex value of the form before the realness check.
    pub fn eval_complex(&self, t: &Tangent<T>) -> Complex<T> {
        let d = &t.dmat;
        let db = d.conj();
        let dz = &t.dvec;
        let dzb = dz.conj();
        let y = &self.yinv;
        let first = siegel_trace(y, d);
        let b1 = tr(&(&self.vv * d) * &(y * &db));
        let b2 = tr(&(y * &dz.transpose()) * &dzb);
        let b3 = tr(&(&(&(&self.v * y) * d) * y) * &dzb.transpose());
        let b4 = tr(&(&(&(&self.v * y) * &db) * y) * &dz.transpose());
        first * self.params.a + (b1 + b2 - b3 - b4) * self.params.b
    }

    pub fn eval(&self, t: &Tangent<T>) -> Result<T> {
        expect_model(t, Model::Upper)?;
        real_value(self.eval_complex(t), 1e-9)
    }
}

/// `ds²_{n,m;A,B}(t)` at `p`.
pub fn q_upper<T: Real>(p: &UpperPoint<T>, t: &Tangent<T>, params: MetricParams<T>) -> Result<T> {
    UpperForm::new(p, params)?.eval(t)
}

/// The Jacobi-invariant line element on D_{n,m} with weights A, B, as the
/// sum of one D_n term and nine vector-coupling trace terms.
#[derive(Clone, Debug)]
pub struct DiskForm<T: Real> {
    /// `(I − WW̄)⁻¹`
    r1: CMatrix<T>,
    /// `(I − W̄W)⁻¹`
    r2: CMatrix<T>,
    /// `(ηW̄ − η̄)(I − WW̄)⁻¹`
    c2: CMatrix<T>,
    /// `(η̄W − η)(I − W̄W)⁻¹`
    c3: CMatrix<T>,
    /// Left factors `L_k` of the terms `σ(L_k dW R2 dW̄)`, with signs folded in.
    left: CMatrix<T>,
    params: MetricParams<T>,
}

impl<T: Real> DiskForm<T> {
    pub fn new(p: &DiskPoint<T>, params: MetricParams<T>) -> Result<Self> {
        let n = p.w.rows();
        let id = CMatrix::identity(n);
        let w = &p.w;
        let wb = w.conj();
        let eta = &p.eta;
        let etab = eta.conj();
        let r1 = (&id - &(w * &wb)).inverse()?;
        let r2 = (&id - &(&wb * w)).inverse()?;
        let ki = (&id - w).inverse()?;
        let kbi = (&id - &wb).inverse()?;
        let et = eta.transpose();
        let ebt = etab.transpose();
        let c2 = &(&(eta * &wb) - &etab) * &r1;
        let c3 = &(&(&etab * w) - eta) * &r2;
        // − R1 ᵗη η R2 W̄
        let t4 = &(&(&(&r1 * &et) * eta) * &r2) * &wb;
        // − W R2 ᵗη̄ η̄ R1
        let t5 = &(&(&(w * &r2) * &ebt) * &etab) * &r1;
        // + R1 ᵗη η̄ R1
        let t6 = &(&(&r1 * &et) * &etab) * &r1;
        // + (I − W̄)⁻¹ ᵗη̄ η W̄ R1
        let t7 = &(&(&(&kbi * &ebt) * eta) * &wb) * &r1;
        // + (I − W̄)⁻¹(I − W) R2 ᵗη̄ η R2 (I − W̄)(I − W)⁻¹
        let t8 = &(&(&(&(&(&(&kbi * &(&id - w)) * &r2) * &ebt) * eta) * &r2) * &(&id - &wb)) * &ki;
        // − R1 (I − W)(I − W̄)⁻¹ ᵗη̄ η (I − W)⁻¹
        let t9 = &(&(&(&(&r1 * &(&id - w)) * &kbi) * &ebt) * eta) * &ki;
        let left = &(&(&(&(&t6 + &t7) + &t8) - &t4) - &t5) - &t9;
        Ok(Self { r1, r2, c2, c3, left, params })
    }

    /// `4σ((I − WW̄)⁻¹ dW (I − W̄W)⁻¹ dW̄)`, the D_n part.
    pub fn disk_n_part(&self, t: &Tangent<T>) -> Complex<T> {
        disk_n_trace(&self.r1, &self.r2, &t.dmat)
    }

    /// The braced vector-coupling part (without the factor 4B).
    pub fn coupling_part(&self, t: &Tangent<T>) -> Complex<T> {
        let dw = &t.dmat;
        let dwb = dw.conj();
        let de = &t.dvec;
        let deb = de.conj();
        let t1 = tr(&(&self.r1 * &de.transpose()) * &deb);
        let t2 = tr(&(&(&self.c2 * dw) * &self.r2) * &deb.transpose());
        let t3 = tr(&(&(&self.c3 * &dwb) * &self.r1) * &de.transpose());
        let rest = tr(&(&(&self.left * dw) * &self.r2) * &dwb);
        t1 + t2 + t3 + rest
    }

    pub fn eval_complex(&self, t: &Tangent<T>) -> Complex<T> {
        self.disk_n_part(t) * self.params.a + self.coupling_part(t) * (T::lit(4.0) * self.params.b)
    }

    pub fn eval(&self, t: &Tangent<T>) -> Result<T> {
        expect_model(t, Model::Disk)?;
        real_value(self.eval_complex(t), 1e-8)
    }
}

/// `ds̃²_{n,m;A,B}(t)` at `p`.
pub fn q_disk<T: Real>(p: &DiskPoint<T>, t: &Tangent<T>, params: MetricParams<T>) -> Result<T> {
    DiskForm::new(p, params)?.eval(t)
}
