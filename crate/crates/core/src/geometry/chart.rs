//! The canonical real chart on `Sym_n(ℂ) × ℂ^(m,n)`.
//!
//! Coordinates, in order: `Re a_{μν}` for μ ≤ ν (lexicographic), then
//! `Im a_{μν}`, then `Re b_{kl}` row-major, then `Im b_{kl}`, where `a` is
//! the symmetric matrix part (Ω or W) and `b` the m×n part (Z or η). A
//! symmetric off-diagonal coordinate fills both slots `(μ,ν)` and `(ν,μ)`.

use num_complex::Complex;

use super::points::{Model, Point, Tangent};
use crate::cmatrix::CMatrix;
use crate::error::Result;
use crate::scalar::Real;

pub const ORDERING_TAG: &str = "canonical-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    pub n: usize,
    pub m: usize,
}

impl Chart {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    /// Number of independent complex entries of the symmetric part.
    pub fn sym_len(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn dim(&self) -> usize {
        2 * self.sym_len() + 2 * self.m * self.n
    }

    /// `(μ, ν)` with μ ≤ ν in lexicographic order.
    pub fn sym_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.sym_len());
        for mu in 0..self.n {
            for nu in mu..self.n {
                out.push((mu, nu));
            }
        }
        out
    }

    /// Index of the real coordinate of `a_{μν}` (μ ≤ ν).
    pub fn sym_index(&self, mu: usize, nu: usize) -> usize {
        let (a, b) = if mu <= nu { (mu, nu) } else { (nu, mu) };
        a * self.n - a * (a + 1) / 2 + b
    }

    /// Index of the real coordinate of `b_{kl}`.
    pub fn vec_index(&self, k: usize, l: usize) -> usize {
        2 * self.sym_len() + k * self.n + l
    }

    /// Offset from a real coordinate to its imaginary partner.
    pub fn im_offset_sym(&self) -> usize {
        self.sym_len()
    }

    pub fn im_offset_vec(&self) -> usize {
        self.m * self.n
    }

    pub fn encode<T: Real>(&self, mat: &CMatrix<T>, vec: &CMatrix<T>) -> Vec<T> {
        let s = self.sym_len();
        let mut out = vec![T::zero(); self.dim()];
        for (i, (mu, nu)) in self.sym_pairs().into_iter().enumerate() {
            out[i] = mat[(mu, nu)].re;
            out[s + i] = mat[(mu, nu)].im;
        }
        let base = 2 * s;
        let mn = self.m * self.n;
        for k in 0..self.m {
            for l in 0..self.n {
                out[base + k * self.n + l] = vec[(k, l)].re;
                out[base + mn + k * self.n + l] = vec[(k, l)].im;
            }
        }
        out
    }

    pub fn decode<T: Real>(&self, coords: &[T]) -> (CMatrix<T>, CMatrix<T>) {
        assert_eq!(coords.len(), self.dim(), "coordinate vector length");
        let s = self.sym_len();
        let mut mat = CMatrix::zeros(self.n, self.n);
        for (i, (mu, nu)) in self.sym_pairs().into_iter().enumerate() {
            let z = Complex::new(coords[i], coords[s + i]);
            mat[(mu, nu)] = z;
            mat[(nu, mu)] = z;
        }
        let base = 2 * s;
        let mn = self.m * self.n;
        let vec = CMatrix::from_fn(self.m, self.n, |k, l| {
            Complex::new(coords[base + k * self.n + l], coords[base + mn + k * self.n + l])
        });
        (mat, vec)
    }

    pub fn point_coords<T: Real>(&self, p: &Point<T>) -> Vec<T> {
        let (a, b) = p.parts();
        self.encode(a, b)
    }

    pub fn point_from_coords<T: Real>(&self, model: Model, coords: &[T]) -> Result<Point<T>> {
        let (a, b) = self.decode(coords);
        Point::from_parts(model, a, b)
    }

    pub fn tangent_coords<T: Real>(&self, t: &Tangent<T>) -> Vec<T> {
        self.encode(&t.dmat, &t.dvec)
    }

    pub fn tangent_from_coords<T: Real>(&self, model: Model, coords: &[T]) -> Tangent<T> {
        let (dmat, dvec) = self.decode(coords);
        Tangent { model, dmat, dvec }
    }

    /// The i-th canonical basis tangent.
    pub fn basis<T: Real>(&self, model: Model, i: usize) -> Tangent<T> {
        let mut e = vec![T::zero(); self.dim()];
        e[i] = T::one();
        self.tangent_from_coords(model, &e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_of_small_charts() {
        let c = Chart::new(2, 1);
        assert_eq!(c.dim(), 10);
        assert_eq!(c.sym_pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(c.sym_index(1, 0), 1);
        assert_eq!(c.sym_index(1, 1), 2);
        assert_eq!(c.vec_index(0, 1), 7);
        assert_eq!(Chart::new(3, 2).dim(), 12 + 12);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let c = Chart::new(3, 2);
        let coords: Vec<f64> = (0..c.dim()).map(|i| i as f64 * 0.37 - 2.0).collect();
        let (a, b) = c.decode(&coords);
        assert_eq!(a.symmetry_defect(), 0.0);
        assert_eq!(c.encode(&a, &b), coords);
    }

    #[test]
    fn off_diagonal_basis_fills_both_slots() {
        let c = Chart::new(2, 1);
        let t = c.basis::<f64>(Model::Disk, 1);
        assert_eq!(t.dmat[(0, 1)], Complex::new(1.0, 0.0));
        assert_eq!(t.dmat[(1, 0)], Complex::new(1.0, 0.0));
        let t = c.basis::<f64>(Model::Disk, 4);
        assert_eq!(t.dmat[(0, 1)], Complex::new(0.0, 1.0));
    }
}
