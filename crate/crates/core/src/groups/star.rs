use serde::{Deserialize, Serialize};

use super::symplectic::symplectic_defect;
use super::theta::{t_star, t_star_inv};
use super::{check_shape, rel_tol};
use crate::cmatrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::scalar::{imag_unit, Real};

/// `[[P, Q], [Q̄, P̄]]` in G_* = SU(n,n) ∩ Sp(n,ℂ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GStarElement<T: Real> {
    pub p: CMatrix<T>,
    pub q: CMatrix<T>,
}

impl<T: Real> GStarElement<T> {
    pub fn new(p: CMatrix<T>, q: CMatrix<T>) -> Result<Self> {
        let g = Self { p, q };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            p: CMatrix::identity(n),
            q: CMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn matrix(&self) -> CMatrix<T> {
        let pb = self.p.conj();
        let qb = self.q.conj();
        CMatrix::from_blocks(&[&[&self.p, &self.q], &[&qb, &pb]]).expect("square blocks")
    }

    /// `T_*·M·T_*⁻¹`, which is real symplectic exactly when `M ∈ G_*`.
    pub fn real_form(&self) -> CMatrix<T> {
        let n = self.n();
        &(&t_star::<T>(n) * &self.matrix()) * &t_star_inv::<T>(n)
    }

    /// Worst of the imaginary residue and the symplectic defect of the real form.
    pub fn membership_defect(&self) -> T {
        let r = self.real_form();
        r.im().max_abs().max(symplectic_defect(&r.re()))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.p.rows();
        check_shape("p", &self.p, n, n).map_err(Error::InvalidElement)?;
        check_shape("q", &self.q, n, n).map_err(Error::InvalidElement)?;
        let scale = self.p.max_abs().max(self.q.max_abs());
        let defect = self.membership_defect();
        if !(defect <= rel_tol(1e-10, scale * scale)) {
            return Err(Error::InvalidElement(format!(
                "[[P,Q],[conj Q,conj P]] is not in SU(n,n) ∩ Sp(n,C) (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// `(PP′ + QQ̄′, PQ′ + QP̄′)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n() != rhs.n() {
            return Err(Error::ShapeMismatch {
                op: "gstar_mul",
                left: self.p.shape(),
                right: rhs.p.shape(),
            });
        }
        Ok(Self {
            p: &(&self.p * &rhs.p) + &(&self.q * &rhs.q.conj()),
            q: &(&self.p * &rhs.q) + &(&self.q * &rhs.p.conj()),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n();
        let inv = self.matrix().inverse()?;
        Ok(Self {
            p: inv.block(0, 0, n, n),
            q: inv.block(0, n, n, n),
        })
    }

    pub fn dist(&self, other: &Self) -> T {
        self.p.dist(&other.p).max(self.q.dist(&other.q))
    }
}

/// `(g, (ξ, ξ̄; iκ))` in the disk-model Jacobi group. The real matrix `kappa`
/// is the coefficient of `i` in the central entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JacobiStarElement<T: Real> {
    pub g: GStarElement<T>,
    pub xi: CMatrix<T>,
    pub kappa: RMatrix<T>,
}

impl<T: Real> JacobiStarElement<T> {
    pub fn new(g: GStarElement<T>, xi: CMatrix<T>, kappa: RMatrix<T>) -> Result<Self> {
        let e = Self { g, xi, kappa };
        e.validate()?;
        Ok(e)
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            g: GStarElement::identity(n),
            xi: CMatrix::zeros(m, n),
            kappa: RMatrix::zeros(m, m),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.xi.cols(), self.xi.rows())
    }

    /// `‖S − ᵗS‖` for `S = κ + Im(ξ̄ᵗξ)`.
    pub fn symmetry_defect(&self) -> T {
        (&self.kappa + &(&self.xi.conj() * &self.xi.transpose()).im()).symmetry_defect()
    }

    pub fn validate(&self) -> Result<()> {
        self.g.validate()?;
        let (n, m) = self.dims();
        if n != self.g.n() {
            return Err(Error::InvalidElement(format!(
                "xi has {n} columns but G_* has degree {}",
                self.g.n()
            )));
        }
        check_shape("kappa", &self.kappa, m, m).map_err(Error::InvalidElement)?;
        let scale = self.xi.max_abs() * self.xi.max_abs() + self.kappa.max_abs();
        let defect = self.symmetry_defect();
        if !(defect <= rel_tol(1e-12, scale)) {
            return Err(Error::InvalidElement(format!(
                "kappa + Im(conj(xi) xi^T) is not symmetric (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// `ξP′ + ξ̄Q̄′`.
    fn twist(xi: &CMatrix<T>, g: &GStarElement<T>) -> CMatrix<T> {
        &(xi * &g.p) + &(&xi.conj() * &g.q.conj())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dims() != rhs.dims() {
            return Err(Error::ShapeMismatch {
                op: "jacobistar_mul",
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let xt = Self::twist(&self.xi, &rhs.g);
        // ξ̃ᵗξ̄′ − ξ̃̄ᵗξ′ = 2i·Im(ξ̃ᵗξ̄′)
        let cross = (&xt * &rhs.xi.conj().transpose()).im().scale(T::lit(2.0));
        Ok(Self {
            g: self.g.mul(&rhs.g)?,
            xi: &xt + &rhs.xi,
            kappa: &(&self.kappa + &rhs.kappa) + &cross,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let ginv = self.g.inverse()?;
        let xt = Self::twist(&self.xi, &ginv);
        let cross = (&xt * &xt.conj().transpose()).im().scale(T::lit(2.0));
        Ok(Self {
            g: ginv,
            xi: -&xt,
            kappa: &(-&self.kappa) + &cross,
        })
    }

    /// The 2(n+m)×2(n+m) complex matrix `[[P_*, Q_*], [Q̄_*, P̄_*]]` obtained by
    /// conjugating the Sp(m+n, ℝ) image with `T_*`.
    pub fn embedded(&self) -> CMatrix<T> {
        let (n, m) = self.dims();
        let i = imag_unit::<T>();
        let p = &self.g.p;
        let q = &self.g.q;
        let xi_t = self.xi.transpose();
        let xib = self.xi.conj();
        let xib_t = xib.transpose();
        let kc = self.kappa.to_complex();
        let im = CMatrix::<T>::identity(m);
        let ps_tr = &(q * &xi_t) - &(p * &xib_t);
        let ps_br = &im - &kc.scale(i);
        let qs_tr = &(p * &xib_t) - &(q * &xi_t);
        let qs_br = kc.scale(i);
        let ps = CMatrix::from_blocks(&[&[p, &ps_tr], &[&self.xi, &ps_br]]).expect("blocks");
        let qs = CMatrix::from_blocks(&[&[q, &qs_tr], &[&xib, &qs_br]]).expect("blocks");
        let out = CMatrix::from_blocks(&[&[&ps, &qs], &[&qs.conj(), &ps.conj()]]).expect("blocks");
        debug_assert_eq!(out.rows(), 2 * (n + m));
        out
    }

    pub fn dist(&self, other: &Self) -> T {
        self.g
            .dist(&other.g)
            .max(self.xi.dist(&other.xi))
            .max(self.kappa.dist(&other.kappa))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn rotation_is_member() {
        let i = imag_unit::<f64>();
        let g = GStarElement::new(CMatrix::identity(2).scale(i), CMatrix::zeros(2, 2)).unwrap();
        assert!(g.membership_defect() < 1e-15);
        let gg = g.mul(&g).unwrap();
        assert!(gg.p.dist(&CMatrix::identity(2).scale(Complex::new(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn non_member_rejected() {
        let p = CMatrix::<f64>::identity(1).scale(Complex::new(2.0, 0.0));
        assert!(GStarElement::new(p, CMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn identity_embeds_to_identity() {
        let e = JacobiStarElement::<f64>::identity(2, 1);
        assert_eq!(e.embedded(), CMatrix::identity(6));
    }
}
