use serde::{Deserialize, Serialize};

use super::{check_shape, rel_tol};
use crate::cmatrix::RMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(λ, μ; κ)` in the real Heisenberg group, λ and μ of size m×n and κ of
/// size m×m with `κ + μ·ᵗλ` symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HeisenbergElement<T: Real> {
    pub lambda: RMatrix<T>,
    pub mu: RMatrix<T>,
    pub kappa: RMatrix<T>,
}

impl<T: Real> HeisenbergElement<T> {
    pub fn new(lambda: RMatrix<T>, mu: RMatrix<T>, kappa: RMatrix<T>) -> Result<Self> {
        let h = Self { lambda, mu, kappa };
        h.validate()?;
        Ok(h)
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            lambda: RMatrix::zeros(m, n),
            mu: RMatrix::zeros(m, n),
            kappa: RMatrix::zeros(m, m),
        }
    }

    /// `(n, m)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.lambda.cols(), self.lambda.rows())
    }

    /// `‖(κ + μᵗλ) − ᵗ(κ + μᵗλ)‖_max`.
    pub fn symmetry_defect(&self) -> T {
        (&self.kappa + &(&self.mu * &self.lambda.transpose())).symmetry_defect()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = self.dims();
        check_shape("lambda", &self.lambda, m, n).map_err(Error::InvalidElement)?;
        check_shape("mu", &self.mu, m, n).map_err(Error::InvalidElement)?;
        check_shape("kappa", &self.kappa, m, m).map_err(Error::InvalidElement)?;
        let scale = self.lambda.max_abs() * self.mu.max_abs() + self.kappa.max_abs();
        let defect = self.symmetry_defect();
        if !(defect <= rel_tol(1e-12, scale)) {
            return Err(Error::InvalidElement(format!(
                "kappa + mu*lambda^T is not symmetric (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// `(λ+λ′, μ+μ′; κ+κ′+λᵗμ′−μᵗλ′)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        same_dims(self, rhs)?;
        let kappa = &(&self.kappa + &rhs.kappa) + &(&self.lambda * &rhs.mu.transpose())
            - &self.mu * &rhs.lambda.transpose();
        Ok(Self {
            lambda: &self.lambda + &rhs.lambda,
            mu: &self.mu + &rhs.mu,
            kappa,
        })
    }

    /// `(−λ, −μ; −κ+λᵗμ−μᵗλ)`.
    pub fn inverse(&self) -> Self {
        let kappa = &(-&self.kappa) + &(&self.lambda * &self.mu.transpose())
            - &self.mu * &self.lambda.transpose();
        Self {
            lambda: -&self.lambda,
            mu: -&self.mu,
            kappa,
        }
    }

    pub fn dist(&self, other: &Self) -> T {
        self.lambda
            .dist(&other.lambda)
            .max(self.mu.dist(&other.mu))
            .max(self.kappa.dist(&other.kappa))
    }
}

fn same_dims<T: Real>(a: &HeisenbergElement<T>, b: &HeisenbergElement<T>) -> Result<()> {
    if a.lambda.shape() != b.lambda.shape() {
        return Err(Error::ShapeMismatch {
            op: "heisenberg_mul",
            left: a.lambda.shape(),
            right: b.lambda.shape(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(l: f64, m: f64, k: f64) -> HeisenbergElement<f64> {
        let one = |x| RMatrix::from_row_slice(1, 1, &[x]).unwrap();
        HeisenbergElement::new(one(l), one(m), one(k)).unwrap()
    }

    #[test]
    fn scalar_products() {
        assert_eq!(scalar(1.0, 0.0, 0.0).mul(&scalar(0.0, 1.0, 0.0)).unwrap(), scalar(1.0, 1.0, 1.0));
        assert_eq!(scalar(1.0, 1.0, 1.0).inverse(), scalar(-1.0, -1.0, -1.0));
        let x = scalar(0.3, -2.0, 5.0);
        assert_eq!(x.mul(&HeisenbergElement::identity(1, 1)).unwrap(), x);
    }

    #[test]
    fn rejects_asymmetric_center() {
        let l = RMatrix::from_row_slice(2, 1, &[1.0, 0.0]).unwrap();
        let m = RMatrix::from_row_slice(2, 1, &[0.0, 1.0]).unwrap();
        // μᵗλ = [[0,0],[1,0]] so κ = 0 leaves an antisymmetric remainder.
        let err = HeisenbergElement::new(l.clone(), m.clone(), RMatrix::zeros(2, 2)).unwrap_err();
        assert!(matches!(err, Error::InvalidElement(_)));
        let k = RMatrix::from_row_slice(2, 2, &[0.0, 0.5, -0.5, 0.0]).unwrap();
        assert!(HeisenbergElement::new(l, m, k).is_ok());
    }

    #[test]
    fn mismatched_dims_error() {
        let a = HeisenbergElement::<f64>::identity(1, 1);
        let b = HeisenbergElement::<f64>::identity(2, 1);
        assert!(a.mul(&b).is_err());
    }
}
