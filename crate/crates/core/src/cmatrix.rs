//! Small dense matrices over a [`Scalar`].
//!
//! Everything here is sized for n ≤ 10; no blocking, no BLAS. Operator
//! overloads panic on shape mismatch (like slice indexing); the `try_*`
//! variants return [`Error::ShapeMismatch`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Relative pivot threshold below which a matrix is reported singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type CMatrix<T> = Matrix<Complex<T>>;
pub type RMatrix<T> = Matrix<T>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major construction with validation of the shape invariants.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[S]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                op: "from_row_slice",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self {
            rows,
            cols,
            data: data.to_vec(),
        })
    }

    pub fn from_diag(d: &[S]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { S::zero() })
    }

    pub fn from_real(m: &Matrix<S::Real>) -> Self {
        m.map(S::from_real)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(S) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square(), "trace of a {}x{} matrix", self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> S::Real {
        self.data
            .iter()
            .map(|x| x.modulus())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Max-norm distance to `other`.
    pub fn dist(&self, other: &Self) -> S::Real {
        (self - other).max_abs()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "add")?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "sub")?;
        Ok(self.zip(rhs, |a, b| a - b))
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `A[B] = ᵗB·A·B` with `self = A`.
    pub fn bracket(&self, b: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                op: "bracket",
                left: self.shape(),
                right: b.shape(),
            });
        }
        b.transpose().try_matmul(&self.try_matmul(b)?)
    }

    /// `(M + ᵗM)/2`.
    pub fn symmetric_part(&self) -> Self {
        let half = S::from_real(S::Real::lit(0.5));
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * half)
    }

    /// `‖M − ᵗM‖_max`.
    pub fn symmetry_defect(&self) -> S::Real {
        if !self.is_square() {
            return S::Real::infinity();
        }
        let mut worst = S::Real::zero();
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).modulus());
            }
        }
        worst
    }

    /// `‖M − M*‖_max`.
    pub fn hermitian_defect(&self) -> S::Real {
        if !self.is_square() {
            return S::Real::infinity();
        }
        let mut worst = S::Real::zero();
        for i in 0..self.rows {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).modulus());
            }
        }
        worst
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Assembles a block matrix from a grid of equally-tall rows of blocks.
    pub fn from_blocks(grid: &[&[&Self]]) -> Result<Self> {
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (r, row) in grid.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if row.len() != widths.len() || b.rows != heights[r] || b.cols != widths[c] {
                    return Err(Error::ShapeMismatch {
                        op: "from_blocks",
                        left: (heights[r], widths.get(c).copied().unwrap_or(0)),
                        right: b.shape(),
                    });
                }
            }
        }
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (r, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (c, b) in row.iter().enumerate() {
                out.set_block(r0, c0, b);
                c0 += widths[c];
            }
            r0 += heights[r];
        }
        Ok(out)
    }

    /// Inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for col in 0..n {
            let mut x: Vec<S> = (0..n)
                .map(|i| if perm[i] == col { S::one() } else { S::zero() })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    let xk = x[k];
                    x[i] -= lu[(i, k)] * xk;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let xk = x[k];
                    x[i] -= lu[(i, k)] * xk;
                }
                x[i] /= lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        Ok(inv)
    }

    /// `self · rhs⁻¹`, the shape every Möbius-type action needs.
    pub fn right_div(&self, rhs: &Self) -> Result<Self> {
        self.try_matmul(&rhs.inverse()?)
    }

    pub fn determinant(&self) -> Result<S> {
        match self.lu() {
            Ok((lu, _, sign)) => Ok((0..self.rows).fold(sign, |acc, i| acc * lu[(i, i)])),
            Err(Error::SingularMatrix { .. }) => Ok(S::zero()),
            Err(e) => Err(e),
        }
    }

    /// Packed LU factors, row permutation (`perm[i]` = source row of row i),
    /// and permutation sign.
    fn lu(&self) -> Result<(Self, Vec<usize>, S)> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                op: "inverse",
                left: self.shape(),
                right: self.shape(),
            });
        }
        if self.rows == 0 {
            return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
        }
        let n = self.rows;
        let scale = self.max_abs();
        let threshold = S::Real::lit(PIVOT_THRESHOLD) * scale;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = S::one();
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[(i, k)].modulus()))
                .fold((k, S::Real::neg_infinity()), |best, c| if c.1 > best.1 { c } else { best });
            if !(pmag > threshold) || scale == S::Real::zero() {
                return Err(Error::SingularMatrix {
                    pivot: pmag.as_f64(),
                    threshold: threshold.as_f64(),
                });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let l = a[(i, k)] / pivot;
                a[(i, k)] = l;
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= l * u;
                }
            }
        }
        Ok((a, perm, sign))
    }

    /// Smallest eigenvalue of the Hermitian part `(M + M*)/2`.
    pub fn min_hermitian_eigenvalue(&self) -> S::Real {
        assert!(self.is_square());
        let k = self.rows;
        let half = S::Real::lit(0.5);
        // Real symmetric embedding [[Re H, −Im H], [Im H, Re H]]; each
        // eigenvalue of H appears twice.
        let emb = Matrix::<S::Real>::from_fn(2 * k, 2 * k, |i, j| {
            let h = (self[(i % k, j % k)] + self[(j % k, i % k)].conj()) * S::from_real(half);
            match (i < k, j < k) {
                (true, true) | (false, false) => h.re(),
                (true, false) => -h.im(),
                (false, true) => h.im(),
            }
        });
        symmetric_eigenvalues(&emb)
            .into_iter()
            .fold(S::Real::infinity(), |a, b| a.min(b))
    }

    /// True iff `‖M − M*‖ ≤ tol` and the Hermitian part has all eigenvalues `> tol`.
    pub fn is_hermitian_pd(&self, tol: S::Real) -> bool {
        self.is_square()
            && self.hermitian_defect() <= tol
            && self.min_hermitian_eigenvalue() > tol
    }

    /// Spectral norm, via the largest eigenvalue of `M*M`.
    pub fn spectral_norm(&self) -> S::Real {
        let g = &self.adjoint() * self;
        let k = g.rows;
        let emb = Matrix::<S::Real>::from_fn(2 * k, 2 * k, |i, j| {
            let h = g[(i % k, j % k)];
            match (i < k, j < k) {
                (true, true) | (false, false) => h.re(),
                (true, false) => -h.im(),
                (false, true) => h.im(),
            }
        });
        symmetric_eigenvalues(&emb)
            .into_iter()
            .fold(S::Real::zero(), |a, b| a.max(b))
            .sqrt()
    }

    fn same_shape(&self, rhs: &Self, op: &'static str) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    fn zip(&self, rhs: &Self, f: impl Fn(S, S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl<T: Real> Matrix<Complex<T>> {
    pub fn from_re_im(re: &Matrix<T>, im: &Matrix<T>) -> Self {
        Self::from_fn(re.rows, re.cols, |i, j| Complex::new(re[(i, j)], im[(i, j)]))
    }

    pub fn re(&self) -> Matrix<T> {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix<T> {
        self.map(|z| z.im)
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.map(|z| z * s)
    }
}

impl<T: Real> Matrix<T> {
    pub fn to_complex(&self) -> Matrix<Complex<T>> {
        self.map(|x| Complex::new(x, T::zero()))
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
/// Only the lower triangle's symmetric counterpart is assumed; the input is
/// symmetrized first.
pub fn symmetric_eigenvalues<T: Real>(m: &Matrix<T>) -> Vec<T> {
    let n = m.rows();
    let mut a = m.symmetric_part();
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
        }
        let diag: T = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<S: Scalar> $tr<&Matrix<S>> for &Matrix<S> {
            type Output = Matrix<S>;

            fn $method(self, rhs: &Matrix<S>) -> Matrix<S> {
                match self.$try(rhs) {
                    Ok(m) => m,
                    Err(e) => panic!("{e}"),
                }
            }
        }

        impl<S: Scalar> $tr<Matrix<S>> for Matrix<S> {
            type Output = Matrix<S>;

            fn $method(self, rhs: Matrix<S>) -> Matrix<S> {
                (&self).$method(&rhs)
            }
        }

        impl<S: Scalar> $tr<&Matrix<S>> for Matrix<S> {
            type Output = Matrix<S>;

            fn $method(self, rhs: &Matrix<S>) -> Matrix<S> {
                (&self).$method(rhs)
            }
        }

        impl<S: Scalar> $tr<Matrix<S>> for &Matrix<S> {
            type Output = Matrix<S>;

            fn $method(self, rhs: Matrix<S>) -> Matrix<S> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_matmul);

impl<S: Scalar> AddAssign<&Matrix<S>> for Matrix<S> {
    fn add_assign(&mut self, rhs: &Matrix<S>) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<S: Scalar> SubAssign<&Matrix<S>> for Matrix<S> {
    fn sub_assign(&mut self, rhs: &Matrix<S>) {
        assert_eq!(self.shape(), rhs.shape(), "sub_assign shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        self.map(|x| -x)
    }
}

impl<S: Scalar> Neg for Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        -&self
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl<S: Scalar> Serialize for Matrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| [x.re().as_f64(), x.im().as_f64()]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Matrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        let mut data = Vec::with_capacity(repr.data.len());
        for [re, im] in repr.data {
            if !re.is_finite() || !im.is_finite() {
                return Err(D::Error::custom("matrix entries must be finite"));
            }
            let x = S::from_parts(S::Real::lit(re), S::Real::lit(im))
                .ok_or_else(|| D::Error::custom("complex entry in a real matrix"))?;
            data.push(x);
        }
        Matrix::from_row_slice(repr.rows, repr.cols, &data).map_err(D::Error::custom)
    }
}
