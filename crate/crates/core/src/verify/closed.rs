//! Hand-expanded n = m = 1, A = B = 1 forms on the disk, used as oracles
//! for the general-size code.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{DiskPoint, Tangent};
use crate::operators::WirtingerHessian;

type C = Complex<f64>;

fn scalars(p: &DiskPoint<f64>) -> Result<(C, C)> {
    if p.dims() != (1, 1) {
        return Err(Error::ShapeMismatch {
            op: "n = m = 1 closed form",
            left: p.dims(),
            right: (1, 1),
        });
    }
    Ok((p.w[(0, 0)], p.eta[(0, 0)]))
}

/// `¼ds̃²_{1,1;1,1}` in the scalar variables.
pub fn quarter_metric_11(p: &DiskPoint<f64>, t: &Tangent<f64>) -> Result<f64> {
    let (w, e) = scalars(p)?;
    let (dw, de) = (t.dmat[(0, 0)], t.dvec[(0, 0)]);
    let r = 1.0 - w.norm_sqr();
    let coupling = (1.0 + w.norm_sqr()) * e.norm_sqr() - (w.conj() * e * e + w * e.conj() * e.conj()).re;
    let v = dw.norm_sqr() / (r * r)
        + de.norm_sqr() / r
        + coupling / (r * r * r) * dw.norm_sqr()
        + ((e * w.conj() - e.conj()) / (r * r) * dw * de.conj()).re
        + ((e.conj() * w - e) / (r * r) * dw.conj() * de).re;
    Ok(v)
}

/// `Δ̃_{1,1;1,1} f` from the second derivatives; symbols are ordered
/// `W, η, W̄, η̄`.
pub fn laplacian_11(p: &DiskPoint<f64>, h: &WirtingerHessian) -> Result<C> {
    let (w, e) = scalars(p)?;
    let k = &h.k;
    let (f_wwb, f_eeb, f_web, f_wbe) = (k[(0, 2)], k[(1, 3)], k[(0, 3)], k[(2, 1)]);
    let r = 1.0 - w.norm_sqr();
    Ok(f_wwb * (r * r) + f_eeb * r + f_web * (r * (e - e.conj() * w)) + f_wbe * (r * (e.conj() - e * w.conj()))
        - f_eeb * (w.conj() * e * e + w * e.conj() * e.conj())
        + f_eeb * ((1.0 + w.norm_sqr()) * e.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMatrix;
    use crate::geometry::Model;

    #[test]
    fn origin_values() {
        let p = DiskPoint::<f64>::origin(1, 1);
        let t = Tangent::new(
            Model::Disk,
            CMatrix::from_row_slice(1, 1, &[C::new(1.0, 0.0)]).unwrap(),
            CMatrix::from_row_slice(1, 1, &[C::new(0.0, 2.0)]).unwrap(),
        )
        .unwrap();
        assert!((quarter_metric_11(&p, &t).unwrap() - 5.0).abs() < 1e-15);
        assert!(quarter_metric_11(&DiskPoint::origin(2, 1), &Tangent::zero(Model::Disk, 2, 1)).is_err());
    }
}
