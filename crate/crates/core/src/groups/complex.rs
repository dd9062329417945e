//! The complex Heisenberg group H_ℂ^(n,m) and its semidirect product with
//! SL(2n, ℂ), used for the Harish-Chandra realization of the disk action.

use serde::{Deserialize, Serialize};

use super::star::JacobiStarElement;
use super::{check_shape, rel_tol};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{imag_unit, Real};

/// `(ξ, η; ζ)` with ξ, η of size m×n and `ζ + η·ᵗξ` symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplexHeisenbergElement<T: Real> {
    pub xi: CMatrix<T>,
    pub eta: CMatrix<T>,
    pub zeta: CMatrix<T>,
}

impl<T: Real> ComplexHeisenbergElement<T> {
    pub fn new(xi: CMatrix<T>, eta: CMatrix<T>, zeta: CMatrix<T>) -> Result<Self> {
        let h = Self { xi, eta, zeta };
        h.validate()?;
        Ok(h)
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            xi: CMatrix::zeros(m, n),
            eta: CMatrix::zeros(m, n),
            zeta: CMatrix::zeros(m, m),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.xi.cols(), self.xi.rows())
    }

    pub fn symmetry_defect(&self) -> T {
        (&self.zeta + &(&self.eta * &self.xi.transpose())).symmetry_defect()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = self.dims();
        check_shape("eta", &self.eta, m, n).map_err(Error::InvalidElement)?;
        check_shape("zeta", &self.zeta, m, m).map_err(Error::InvalidElement)?;
        let scale = self.xi.max_abs() * self.eta.max_abs() + self.zeta.max_abs();
        let defect = self.symmetry_defect();
        if !(defect <= rel_tol(1e-12, scale)) {
            return Err(Error::InvalidElement(format!(
                "zeta + eta*xi^T is not symmetric (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// `(ξ+ξ′, η+η′; ζ+ζ′+ξᵗη′−ηᵗξ′)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            xi: &self.xi + &rhs.xi,
            eta: &self.eta + &rhs.eta,
            zeta: &(&self.zeta + &rhs.zeta) + &(&self.xi * &rhs.eta.transpose())
                - &self.eta * &rhs.xi.transpose(),
        }
    }

    pub fn dist(&self, other: &Self) -> T {
        self.xi
            .dist(&other.xi)
            .max(self.eta.dist(&other.eta))
            .max(self.zeta.dist(&other.zeta))
    }
}

/// `(M, (ξ, η; ζ))` with `M = [[P, Q], [R, S]]` a 2n×2n complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplexJacobiElement<T: Real> {
    pub m: CMatrix<T>,
    pub h: ComplexHeisenbergElement<T>,
}

/// `g = p⁺·k·p⁻` with
/// `p⁺ = ([[I, W], [0, I]], (0, η; 0))`,
/// `k = ([[K, 0], [0, S]], (0, 0; ζ_k))`,
/// `p⁻ = ([[I, 0], [C, I]], (ξ⁻, 0; 0))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarishChandra<T: Real> {
    pub w: CMatrix<T>,
    pub eta: CMatrix<T>,
    pub k: CMatrix<T>,
    pub s: CMatrix<T>,
    pub zeta_k: CMatrix<T>,
    pub c: CMatrix<T>,
    pub xi_minus: CMatrix<T>,
}

impl<T: Real> ComplexJacobiElement<T> {
    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn blocks(&self) -> [CMatrix<T>; 4] {
        let n = self.n();
        [
            self.m.block(0, 0, n, n),
            self.m.block(0, n, n, n),
            self.m.block(n, 0, n, n),
            self.m.block(n, n, n, n),
        ]
    }

    /// `(M, (ξ, ξ̄; iκ))` for a disk-model Jacobi element.
    pub fn from_star(g: &JacobiStarElement<T>) -> Self {
        Self {
            m: g.g.matrix(),
            h: ComplexHeisenbergElement {
                xi: g.xi.clone(),
                eta: g.xi.conj(),
                zeta: g.kappa.to_complex().scale(imag_unit()),
            },
        }
    }

    /// `p⁺ = ([[I, W], [0, I]], (0, η; 0))`.
    pub fn p_plus(w: &CMatrix<T>, eta: &CMatrix<T>) -> Self {
        let n = w.rows();
        let m = eta.rows();
        let zero = CMatrix::zeros(n, n);
        let id = CMatrix::identity(n);
        Self {
            m: CMatrix::from_blocks(&[&[&id, w], &[&zero, &id]]).expect("square blocks"),
            h: ComplexHeisenbergElement {
                xi: CMatrix::zeros(m, n),
                eta: eta.clone(),
                zeta: CMatrix::zeros(m, m),
            },
        }
    }

    /// Product with `(ξ̃, η̃) = (ξP′ + ηR′, ξQ′ + ηS′)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.m.shape() != rhs.m.shape() || self.h.xi.shape() != rhs.h.xi.shape() {
            return Err(Error::ShapeMismatch {
                op: "complex_jacobi_mul",
                left: self.h.xi.shape(),
                right: rhs.h.xi.shape(),
            });
        }
        let [p, q, r, s] = rhs.blocks();
        let xt = &(&self.h.xi * &p) + &(&self.h.eta * &r);
        let et = &(&self.h.xi * &q) + &(&self.h.eta * &s);
        let twisted = ComplexHeisenbergElement {
            xi: xt,
            eta: et,
            zeta: self.h.zeta.clone(),
        };
        Ok(Self {
            m: self.m.try_matmul(&rhs.m)?,
            h: twisted.mul(&rhs.h),
        })
    }

    /// Block factorization `p⁺·k·p⁻`; fails when the S block is singular.
    pub fn harish_chandra(&self) -> Result<HarishChandra<T>> {
        let [p, q, r, s] = self.blocks();
        let s_inv = s.inverse()?;
        let w = &q * &s_inv;
        let eta = &self.h.eta * &s_inv;
        let k = &p - &(&w * &r);
        let c = &s_inv * &r;
        let xi_minus = &self.h.xi - &(&eta * &r);
        let zeta_k = &self.h.zeta + &(&self.h.eta * &xi_minus.transpose());
        Ok(HarishChandra {
            w,
            eta,
            k,
            s,
            zeta_k,
            c,
            xi_minus,
        })
    }
}

impl<T: Real> HarishChandra<T> {
    /// Multiplies the three factors back together.
    pub fn recompose(&self) -> Result<ComplexJacobiElement<T>> {
        let n = self.w.rows();
        let m = self.eta.rows();
        let zn = CMatrix::zeros(n, n);
        let id = CMatrix::identity(n);
        let zmn = CMatrix::zeros(m, n);
        let plus = ComplexJacobiElement::p_plus(&self.w, &self.eta);
        let levi = ComplexJacobiElement {
            m: CMatrix::from_blocks(&[&[&self.k, &zn], &[&zn, &self.s]])?,
            h: ComplexHeisenbergElement {
                xi: zmn.clone(),
                eta: zmn.clone(),
                zeta: self.zeta_k.clone(),
            },
        };
        let minus = ComplexJacobiElement {
            m: CMatrix::from_blocks(&[&[&id, &zn], &[&self.c, &id]])?,
            h: ComplexHeisenbergElement {
                xi: self.xi_minus.clone(),
                eta: zmn,
                zeta: CMatrix::zeros(m, m),
            },
        };
        plus.mul(&levi)?.mul(&minus)
    }
}
