use super::points::{DiskPoint, UpperPoint};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::groups::{ComplexJacobiElement, GStarElement, JacobiElement, JacobiStarElement, SpElement};
use crate::scalar::Real;

/// Largest tolerated asymmetry of a Möbius-type result before it is
/// symmetrized, relative to `1 + ‖R‖_max`.
pub const SYMMETRIZE_DEFECT: f64 = 1e-9;

/// Replaces `R` by `(R + ᵗR)/2` after checking the asymmetry is round-off.
pub(crate) fn symmetrized<T: Real>(r: CMatrix<T>) -> Result<CMatrix<T>> {
    let defect = r.symmetry_defect();
    if !(defect <= T::tol(SYMMETRIZE_DEFECT) * (T::one() + r.max_abs())) {
        return Err(Error::SymmetryDefect { defect: defect.as_f64() });
    }
    Ok(r.symmetric_part())
}

/// `M·Ω = (AΩ + B)(CΩ + D)⁻¹`.
pub fn act_siegel<T: Real>(m: &SpElement<T>, omega: &CMatrix<T>) -> Result<CMatrix<T>> {
    let num = &(&m.a.to_complex() * omega) + &m.b.to_complex();
    let den = &(&m.c.to_complex() * omega) + &m.d.to_complex();
    symmetrized(num.right_div(&den)?)
}

/// `g·(Ω, Z) = (M·Ω, (Z + λΩ + μ)(CΩ + D)⁻¹)`.
pub fn act_upper<T: Real>(g: &JacobiElement<T>, p: &UpperPoint<T>) -> Result<UpperPoint<T>> {
    let sp = &g.sp;
    let num = &(&sp.a.to_complex() * &p.omega) + &sp.b.to_complex();
    let den_inv = (&(&sp.c.to_complex() * &p.omega) + &sp.d.to_complex()).inverse()?;
    let omega = symmetrized(&num * &den_inv)?;
    let shifted = &(&p.z + &(&g.h.lambda.to_complex() * &p.omega)) + &g.h.mu.to_complex();
    Ok(UpperPoint {
        omega,
        z: &shifted * &den_inv,
    })
}

/// `(PW + Q)(Q̄W + P̄)⁻¹` on the generalized unit disk.
pub fn act_disk_n<T: Real>(g: &GStarElement<T>, w: &CMatrix<T>) -> Result<CMatrix<T>> {
    let num = &(&g.p * w) + &g.q;
    let den = &(&g.q.conj() * w) + &g.p.conj();
    symmetrized(num.right_div(&den)?)
}

/// `g·(W, η) = ((PW + Q)(Q̄W + P̄)⁻¹, (η + ξW + ξ̄)(Q̄W + P̄)⁻¹)`.
pub fn act_disk<T: Real>(g: &JacobiStarElement<T>, p: &DiskPoint<T>) -> Result<DiskPoint<T>> {
    let num = &(&g.g.p * &p.w) + &g.g.q;
    let den_inv = (&(&g.g.q.conj() * &p.w) + &g.g.p.conj()).inverse()?;
    let w = symmetrized(&num * &den_inv)?;
    let shifted = &(&p.eta + &(&g.xi * &p.w)) + &g.xi.conj();
    Ok(DiskPoint {
        w,
        eta: &shifted * &den_inv,
    })
}

/// The disk action obtained instead as the `P⁺`-component of
/// `g·([[I, W], [0, I]], (0, η; 0))` in SL(2n, ℂ) ⋉ H_ℂ.
pub fn hc_pplus_component<T: Real>(g: &JacobiStarElement<T>, p: &DiskPoint<T>) -> Result<DiskPoint<T>> {
    let prod = ComplexJacobiElement::from_star(g).mul(&ComplexJacobiElement::p_plus(&p.w, &p.eta))?;
    let hc = prod.harish_chandra()?;
    Ok(DiskPoint {
        w: symmetrized(hc.w)?,
        eta: hc.eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::HeisenbergElement;
    use num_complex::Complex;

    #[test]
    fn j_fixes_i() {
        let omega = CMatrix::<f64>::identity(2).scale(Complex::new(0.0, 1.0));
        let out = act_siegel(&SpElement::j(2), &omega).unwrap();
        assert!(out.dist(&omega) < 1e-15);
    }

    #[test]
    fn pure_translation() {
        let p = UpperPoint::<f64>::base(1, 1);
        let h = HeisenbergElement::new(
            crate::cmatrix::RMatrix::from_row_slice(1, 1, &[2.0]).unwrap(),
            crate::cmatrix::RMatrix::from_row_slice(1, 1, &[-1.0]).unwrap(),
            crate::cmatrix::RMatrix::zeros(1, 1),
        )
        .unwrap();
        let g = JacobiElement { sp: SpElement::identity(1), h };
        let q = act_upper(&g, &p).unwrap();
        assert_eq!(q.omega, p.omega);
        // Z + λΩ + μ = 0 + 2i − 1
        assert!((q.z[(0, 0)] - Complex::new(-1.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_fixes_origin() {
        let i = Complex::new(0.0, 1.0);
        let g = JacobiStarElement {
            g: GStarElement {
                p: CMatrix::identity(1).scale(i),
                q: CMatrix::zeros(1, 1),
            },
            xi: CMatrix::zeros(1, 1),
            kappa: crate::cmatrix::RMatrix::zeros(1, 1),
        };
        let o = DiskPoint::<f64>::origin(1, 1);
        assert_eq!(act_disk(&g, &o).unwrap().dist(&o), 0.0);
        assert_eq!(hc_pplus_component(&g, &o).unwrap().dist(&o), 0.0);
    }
}
