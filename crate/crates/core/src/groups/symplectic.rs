use serde::{Deserialize, Serialize};

use super::{check_shape, rel_tol};
use crate::cmatrix::RMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `M = [[A, B], [C, D]]` in Sp(n, ℝ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpElement<T: Real> {
    pub a: RMatrix<T>,
    pub b: RMatrix<T>,
    pub c: RMatrix<T>,
    pub d: RMatrix<T>,
}

/// `J_n = [[0, I], [−I, 0]]`.
pub fn j_matrix<T: Real>(n: usize) -> RMatrix<T> {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = T::one();
        j[(n + i, i)] = -T::one();
    }
    j
}

impl<T: Real> SpElement<T> {
    pub fn new(a: RMatrix<T>, b: RMatrix<T>, c: RMatrix<T>, d: RMatrix<T>) -> Result<Self> {
        let g = Self { a, b, c, d };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: RMatrix::identity(n),
            b: RMatrix::zeros(n, n),
            c: RMatrix::zeros(n, n),
            d: RMatrix::identity(n),
        }
    }

    /// The element whose matrix is `J_n`.
    pub fn j(n: usize) -> Self {
        Self {
            a: RMatrix::zeros(n, n),
            b: RMatrix::identity(n),
            c: -RMatrix::identity(n),
            d: RMatrix::zeros(n, n),
        }
    }

    pub fn from_matrix(m: &RMatrix<T>) -> Self {
        let n = m.rows() / 2;
        Self {
            a: m.block(0, 0, n, n),
            b: m.block(0, n, n, n),
            c: m.block(n, 0, n, n),
            d: m.block(n, n, n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> RMatrix<T> {
        RMatrix::from_blocks(&[&[&self.a, &self.b], &[&self.c, &self.d]])
            .expect("blocks validated on construction")
    }

    /// `‖ᵗM J M − J‖_max`.
    pub fn symplectic_defect(&self) -> T {
        symplectic_defect(&self.matrix())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.rows();
        for (name, blk) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            check_shape(name, blk, n, n).map_err(Error::InvalidElement)?;
        }
        if n == 0 {
            return Err(Error::InvalidElement("empty symplectic block".into()));
        }
        let m = self.matrix();
        let defect = symplectic_defect(&m);
        let scale = m.max_abs();
        if !(defect <= rel_tol(1e-10, scale * scale)) {
            return Err(Error::InvalidElement(format!(
                "M^T J M != J (defect {defect:e})"
            )));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(Self::from_matrix(&self.matrix().try_matmul(&rhs.matrix())?))
    }

    /// `[[ᵗD, −ᵗB], [−ᵗC, ᵗA]]`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.transpose(),
            b: -self.b.transpose(),
            c: -self.c.transpose(),
            d: self.a.transpose(),
        }
    }

    pub fn dist(&self, other: &Self) -> T {
        self.matrix().dist(&other.matrix())
    }
}

pub fn symplectic_defect<T: Real>(m: &RMatrix<T>) -> T {
    let j = j_matrix::<T>(m.rows() / 2);
    (&(&m.transpose() * &j) * m).dist(&j)
}
