use serde::{Deserialize, Serialize};

use super::heisenberg::HeisenbergElement;
use super::symplectic::SpElement;
use crate::cmatrix::RMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(M, (λ, μ; κ))` in the Jacobi group Sp(n,ℝ) ⋉ H_ℝ^(n,m).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JacobiElement<T: Real> {
    pub sp: SpElement<T>,
    pub h: HeisenbergElement<T>,
}

impl<T: Real> JacobiElement<T> {
    pub fn new(sp: SpElement<T>, h: HeisenbergElement<T>) -> Result<Self> {
        let g = Self { sp, h };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            sp: SpElement::identity(n),
            h: HeisenbergElement::identity(n, m),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.h.dims()
    }

    pub fn validate(&self) -> Result<()> {
        self.sp.validate()?;
        self.h.validate()?;
        if self.sp.n() != self.h.dims().0 {
            return Err(Error::InvalidElement(format!(
                "symplectic degree {} does not match Heisenberg n = {}",
                self.sp.n(),
                self.h.dims().0
            )));
        }
        Ok(())
    }

    /// `(λ, μ)·M` for a block `M = [[A,B],[C,D]]`: `(λA + μC, λB + μD)`.
    fn twist(lambda: &RMatrix<T>, mu: &RMatrix<T>, m: &SpElement<T>) -> (RMatrix<T>, RMatrix<T>) {
        (
            &(lambda * &m.a) + &(mu * &m.c),
            &(lambda * &m.b) + &(mu * &m.d),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dims() != rhs.dims() {
            return Err(Error::ShapeMismatch {
                op: "jacobi_mul",
                left: self.dims(),
                right: rhs.dims(),
            });
        }
        let (lt, mt) = Self::twist(&self.h.lambda, &self.h.mu, &rhs.sp);
        let kappa = &(&self.h.kappa + &rhs.h.kappa) + &(&lt * &rhs.h.mu.transpose())
            - &mt * &rhs.h.lambda.transpose();
        Ok(Self {
            sp: self.sp.mul(&rhs.sp)?,
            h: HeisenbergElement {
                lambda: &lt + &rhs.h.lambda,
                mu: &mt + &rhs.h.mu,
                kappa,
            },
        })
    }

    pub fn inverse(&self) -> Self {
        let minv = self.sp.inverse();
        let (lt, mt) = Self::twist(&self.h.lambda, &self.h.mu, &minv);
        let kappa = &(-&self.h.kappa) + &(&lt * &mt.transpose()) - &mt * &lt.transpose();
        Self {
            sp: minv,
            h: HeisenbergElement {
                lambda: -&lt,
                mu: -&mt,
                kappa,
            },
        }
    }

    /// The image in Sp(m+n, ℝ), with row/column blocks of sizes (n, m, n, m).
    pub fn embed_sp(&self) -> RMatrix<T> {
        let (n, m) = self.dims();
        let SpElement { a, b, c, d } = &self.sp;
        let HeisenbergElement { lambda, mu, kappa } = &self.h;
        let lt = lambda.transpose();
        let mt = mu.transpose();
        let zn = RMatrix::zeros(n, m);
        let zm = RMatrix::zeros(m, n);
        let zmm = RMatrix::zeros(m, m);
        let im = RMatrix::identity(m);
        let top = &(a * &mt) - &(b * &lt);
        let third = &(c * &mt) - &(d * &lt);
        RMatrix::from_blocks(&[
            &[a, &zn, b, &top],
            &[lambda, &im, mu, kappa],
            &[c, &zn, d, &third],
            &[&zm, &zmm, &zm, &im],
        ])
        .expect("block sizes are consistent for a validated element")
    }

    pub fn dist(&self, other: &Self) -> T {
        self.sp.dist(&other.sp).max(self.h.dist(&other.h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::symplectic::symplectic_defect;

    fn sample() -> JacobiElement<f64> {
        let sp = SpElement::j(2)
            .mul(&SpElement::new(
                RMatrix::identity(2),
                RMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.2, -0.1]).unwrap(),
                RMatrix::zeros(2, 2),
                RMatrix::identity(2),
            )
            .unwrap())
            .unwrap();
        let lambda = RMatrix::from_row_slice(1, 2, &[0.3, -0.7]).unwrap();
        let mu = RMatrix::from_row_slice(1, 2, &[1.1, 0.4]).unwrap();
        let kappa = RMatrix::from_row_slice(1, 1, &[0.25]).unwrap();
        JacobiElement::new(sp, HeisenbergElement::new(lambda, mu, kappa).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let g = sample();
        let e = JacobiElement::identity(2, 1);
        assert_eq!(g.mul(&e).unwrap(), g);
        assert!(g.mul(&g.inverse()).unwrap().dist(&e) < 1e-14);
        assert!(g.inverse().mul(&g).unwrap().dist(&e) < 1e-14);
    }

    #[test]
    fn pure_symplectic_times_pure_heisenberg() {
        let g = sample();
        let m = JacobiElement { sp: g.sp.clone(), h: HeisenbergElement::identity(2, 1) };
        let h = JacobiElement { sp: SpElement::identity(2), h: g.h.clone() };
        let prod = m.mul(&h).unwrap();
        assert_eq!(prod.sp, g.sp);
        assert_eq!(prod.h, g.h);
    }

    #[test]
    fn embedding_is_symplectic_and_identity_preserving() {
        assert_eq!(JacobiElement::<f64>::identity(2, 2).embed_sp(), RMatrix::identity(8));
        let e = sample().embed_sp();
        assert_eq!(e.shape(), (6, 6));
        assert!(symplectic_defect(&e) < 1e-13);
    }
}
