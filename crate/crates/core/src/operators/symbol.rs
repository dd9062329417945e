//! Matrices of first- and second-order constant-coefficient differential
//! operators at a fixed point, over the 2N Wirtinger symbols of a chart.
//!
//! A [`LinOp`] entry is a linear form `Σ_s a_s D_s`; a [`QuadOp`] entry is
//! `Σ_{s,t} a_st D_s D_t`. Coefficient matrices act from the left or right
//! and are never differentiated, which is how the trace formulas for the
//! Laplacians are read.

use num_complex::Complex;

use super::fd::{complex_coord, complex_dim, WirtingerHessian};
use crate::cmatrix::CMatrix;
use crate::geometry::Chart;

type C = Complex<f64>;

#[derive(Clone, Debug)]
pub struct LinOp {
    rows: usize,
    cols: usize,
    ns: usize,
    data: Vec<Vec<C>>,
}

impl LinOp {
    pub fn zeros(rows: usize, cols: usize, ns: usize) -> Self {
        Self {
            rows,
            cols,
            ns,
            data: vec![vec![C::new(0.0, 0.0); ns]; rows * cols],
        }
    }

    /// `∂/∂Ω` (or `∂/∂Ω̄` when `anti`), with weight 1 on the diagonal and ½
    /// off it.
    pub fn d_mat(chart: &Chart, anti: bool) -> Self {
        let nc = complex_dim(chart);
        let mut out = Self::zeros(chart.n, chart.n, 2 * nc);
        for (c, (mu, nu)) in chart.sym_pairs().into_iter().enumerate() {
            let w = if mu == nu { 1.0 } else { 0.5 };
            let s = c + if anti { nc } else { 0 };
            out.data[mu * chart.n + nu][s] = C::new(w, 0.0);
            out.data[nu * chart.n + mu][s] = C::new(w, 0.0);
        }
        out
    }

    /// `∂/∂Z` (n×m, entry (l,k) = ∂/∂z_kl) or its conjugate.
    pub fn d_vec(chart: &Chart, anti: bool) -> Self {
        let nc = complex_dim(chart);
        let (n, m) = (chart.n, chart.m);
        let mut out = Self::zeros(n, m, 2 * nc);
        for k in 0..m {
            for l in 0..n {
                let c = chart.sym_len() + k * n + l;
                debug_assert!(complex_coord(chart, c).0 == chart.vec_index(k, l));
                out.data[l * m + k][c + if anti { nc } else { 0 }] = C::new(1.0, 0.0);
            }
        }
        out
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn at(&self, i: usize, j: usize) -> &[C] {
        &self.data[i * self.cols + j]
    }

    /// `A·L`.
    pub fn left(a: &CMatrix<f64>, l: &LinOp) -> LinOp {
        assert_eq!(a.cols(), l.rows, "coefficient times operator shape");
        let mut out = LinOp::zeros(a.rows(), l.cols, l.ns);
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let c = a[(i, k)];
                if c == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..l.cols {
                    let src = l.at(k, j);
                    let dst = &mut out.data[i * l.cols + j];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += c * s;
                    }
                }
            }
        }
        out
    }

    /// `L·A`.
    pub fn right(&self, a: &CMatrix<f64>) -> LinOp {
        LinOp::left(&a.transpose(), &self.transpose()).transpose()
    }

    pub fn transpose(&self) -> LinOp {
        let mut out = LinOp::zeros(self.cols, self.rows, self.ns);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j).to_vec();
            }
        }
        out
    }

    pub fn add(&self, other: &LinOp) -> LinOp {
        assert_eq!(self.shape(), other.shape(), "operator sum shape");
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            for (a, b) in d.iter_mut().zip(s) {
                *a += b;
            }
        }
        out
    }

    /// `(L + ᵗL)/2`.
    pub fn sym(&self) -> LinOp {
        let t = self.transpose();
        let mut out = self.add(&t);
        for d in &mut out.data {
            for a in d.iter_mut() {
                *a *= 0.5;
            }
        }
        out
    }

    /// The matrix product `L₁L₂` with entries `Σ_k L₁_ik L₂_kj`.
    pub fn then(&self, other: &LinOp) -> QuadOp {
        assert_eq!(self.cols, other.rows, "operator product shape");
        let ns = self.ns;
        let mut out = QuadOp::zeros(self.rows, other.cols, ns);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    let dst = &mut out.data[i * other.cols + j];
                    for (s, as_) in a.iter().enumerate() {
                        if *as_ == C::new(0.0, 0.0) {
                            continue;
                        }
                        for (t, bt) in b.iter().enumerate() {
                            dst[s * ns + t] += as_ * bt;
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct QuadOp {
    rows: usize,
    cols: usize,
    ns: usize,
    data: Vec<Vec<C>>,
}

impl QuadOp {
    fn zeros(rows: usize, cols: usize, ns: usize) -> Self {
        Self {
            rows,
            cols,
            ns,
            data: vec![vec![C::new(0.0, 0.0); ns * ns]; rows * cols],
        }
    }

    /// `A·Q`.
    pub fn left(a: &CMatrix<f64>, q: &QuadOp) -> QuadOp {
        assert_eq!(a.cols(), q.rows, "coefficient times operator shape");
        let mut out = QuadOp::zeros(a.rows(), q.cols, q.ns);
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let c = a[(i, k)];
                for j in 0..q.cols {
                    let src = &q.data[k * q.cols + j];
                    let dst = &mut out.data[i * q.cols + j];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += c * s;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Symbol {
        assert_eq!(self.rows, self.cols, "trace of a non-square operator");
        let mut k = vec![C::new(0.0, 0.0); self.ns * self.ns];
        for i in 0..self.rows {
            for (a, b) in k.iter_mut().zip(&self.data[i * self.cols + i]) {
                *a += b;
            }
        }
        Symbol { ns: self.ns, k }
    }
}

/// A scalar second-order operator `Σ K_st D_s D_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    ns: usize,
    k: Vec<C>,
}

impl Symbol {
    pub fn zero(ns: usize) -> Self {
        Self {
            ns,
            k: vec![C::new(0.0, 0.0); ns * ns],
        }
    }

    pub fn symbols(&self) -> usize {
        self.ns
    }

    pub fn coefficient(&self, s: usize, t: usize) -> C {
        self.k[s * self.ns + t]
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        assert_eq!(self.ns, other.ns);
        Symbol {
            ns: self.ns,
            k: self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Symbol {
        Symbol {
            ns: self.ns,
            k: self.k.iter().map(|a| a * c).collect(),
        }
    }

    /// `Σ K_st (D_s D_t f)`.
    pub fn apply(&self, h: &WirtingerHessian) -> C {
        assert_eq!(self.ns, h.symbols(), "symbol count");
        let mut acc = C::new(0.0, 0.0);
        for s in 0..self.ns {
            for t in 0..self.ns {
                acc += self.k[s * self.ns + t] * h.k[(s, t)];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_d_dbar_on_one_variable() {
        let chart = Chart::new(1, 1);
        let d = LinOp::d_mat(&chart, false);
        let db = LinOp::d_mat(&chart, true);
        let k = d.then(&db).trace();
        // symbols: w, η, w̄, η̄
        assert_eq!(k.coefficient(0, 2), C::new(1.0, 0.0));
        assert_eq!(k.coefficient(2, 0), C::new(0.0, 0.0));
    }

    #[test]
    fn right_and_transpose_agree_with_left() {
        let chart = Chart::new(2, 1);
        let d = LinOp::d_mat(&chart, false);
        let a = CMatrix::from_fn(2, 2, |i, j| C::new(i as f64 + 1.0, j as f64 - 0.5));
        // ᵗ(L·A) = ᵗA·ᵗL
        let lhs = d.right(&a).transpose();
        let rhs = LinOp::left(&a.transpose(), &d.transpose());
        for (x, y) in lhs.data.iter().zip(&rhs.data) {
            assert_eq!(x, y);
        }
        assert_eq!(LinOp::d_vec(&chart, true).shape(), (2, 1));
    }
}
