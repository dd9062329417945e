//! Central-difference derivatives on chart coordinates and their Wirtinger
//! rearrangement.

use num_complex::Complex;

use super::field::ScalarField;
use crate::cmatrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::geometry::{Chart, Point};

/// `max |x_i|`, the scale the step sizes are proportional to.
pub fn point_scale(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// `h₁ = 1e-5·(1 + scale)` for first derivatives.
pub fn first_step(x: &[f64]) -> f64 {
    1e-5 * (1.0 + point_scale(x))
}

/// `h₂ = 1e-4·(1 + scale)` for second derivatives.
pub fn second_step(x: &[f64]) -> f64 {
    1e-4 * (1.0 + point_scale(x))
}

/// Rejects points whose boundary margin is below `required`.
pub fn check_margin(p: &Point<f64>, required: f64) -> Result<()> {
    let margin = p.margin();
    if !(margin >= required) {
        return Err(Error::DomainMargin { margin, required });
    }
    Ok(())
}

fn finite_or_err(vals: impl IntoIterator<Item = f64>) -> Result<()> {
    if vals.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::InvalidPoint("field is not finite on the difference stencil".into()))
    }
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

pub fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| (f(&shifted(x, &[(i, h)])) - f(&shifted(x, &[(i, -h)]))) / (2.0 * h))
        .collect()
}

/// `(4G(h/2) − G(h))/3`.
pub fn gradient_richardson(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let coarse = gradient(f, x, h);
    let fine = gradient(f, x, h / 2.0);
    fine.iter().zip(&coarse).map(|(a, b)| (4.0 * a - b) / 3.0).collect()
}

/// Central difference of the central-difference gradient with the same
/// step: a 4-point stencil off the diagonal and `±2h` on it.
pub fn hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> RMatrix<f64> {
    let d = x.len();
    let f0 = f(x);
    let mut out = RMatrix::zeros(d, d);
    for i in 0..d {
        let pp = f(&shifted(x, &[(i, 2.0 * h)]));
        let mm = f(&shifted(x, &[(i, -2.0 * h)]));
        out[(i, i)] = (pp - 2.0 * f0 + mm) / (4.0 * h * h);
        for j in i + 1..d {
            let pp = f(&shifted(x, &[(i, h), (j, h)]));
            let pm = f(&shifted(x, &[(i, h), (j, -h)]));
            let mp = f(&shifted(x, &[(i, -h), (j, h)]));
            let mm = f(&shifted(x, &[(i, -h), (j, -h)]));
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

pub fn hessian_richardson(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> RMatrix<f64> {
    let coarse = hessian(f, x, h);
    let fine = hessian(f, x, h / 2.0);
    (&fine.scale(4.0) - &coarse).scale(1.0 / 3.0)
}

/// Real coordinate indices `(Re, Im)` of the c-th complex chart coordinate:
/// the symmetric entries first, then the vector entries.
pub fn complex_coord(chart: &Chart, c: usize) -> (usize, usize) {
    let s = chart.sym_len();
    if c < s {
        (c, s + c)
    } else {
        let v = c - s;
        (2 * s + v, 2 * s + chart.m * chart.n + v)
    }
}

/// Number of complex chart coordinates.
pub fn complex_dim(chart: &Chart) -> usize {
    chart.sym_len() + chart.m * chart.n
}

/// Weighted Wirtinger first derivatives of a field, arranged as the
/// operators `∂/∂Ω` (n×n), `∂/∂Ω̄`, `∂/∂Z` (n×m, entry (l,k) = ∂/∂z_kl) and
/// `∂/∂Z̄`; on the disk read W, η for Ω, Z.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeBundle {
    pub d_mat: CMatrix<f64>,
    pub d_mat_bar: CMatrix<f64>,
    pub d_vec: CMatrix<f64>,
    pub d_vec_bar: CMatrix<f64>,
}

impl DerivativeBundle {
    pub fn from_gradient(chart: &Chart, g: &[f64]) -> Self {
        let (n, m) = (chart.n, chart.m);
        let mut d_mat = CMatrix::zeros(n, n);
        let mut d_mat_bar = CMatrix::zeros(n, n);
        for (c, (mu, nu)) in chart.sym_pairs().into_iter().enumerate() {
            let (re, im) = complex_coord(chart, c);
            let w = if mu == nu { 0.5 } else { 0.25 };
            let hol = Complex::new(w * g[re], -w * g[im]);
            d_mat[(mu, nu)] = hol;
            d_mat[(nu, mu)] = hol;
            d_mat_bar[(mu, nu)] = hol.conj();
            d_mat_bar[(nu, mu)] = hol.conj();
        }
        let mut d_vec = CMatrix::zeros(n, m);
        let mut d_vec_bar = CMatrix::zeros(n, m);
        for k in 0..m {
            for l in 0..n {
                let (re, im) = complex_coord(chart, chart.sym_len() + k * n + l);
                let hol = Complex::new(0.5 * g[re], -0.5 * g[im]);
                d_vec[(l, k)] = hol;
                d_vec_bar[(l, k)] = hol.conj();
            }
        }
        Self {
            d_mat,
            d_mat_bar,
            d_vec,
            d_vec_bar,
        }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.d_mat
            .dist(&other.d_mat)
            .max(self.d_mat_bar.dist(&other.d_mat_bar))
            .max(self.d_vec.dist(&other.d_vec))
            .max(self.d_vec_bar.dist(&other.d_vec_bar))
    }
}

fn bundle_with(
    f: &ScalarField,
    p: &Point<f64>,
    h: f64,
    grad: fn(&dyn Fn(&[f64]) -> f64, &[f64], f64) -> Vec<f64>,
) -> Result<DerivativeBundle> {
    expect_field(f, p)?;
    check_margin(p, 2.0 * h)?;
    let chart = f.chart();
    let x = chart.point_coords(p);
    let g = grad(&|y| f.eval(y), &x, h);
    finite_or_err(g.iter().copied())?;
    Ok(DerivativeBundle::from_gradient(&chart, &g))
}

/// First derivatives by plain central differences with step `h`.
pub fn wirtinger_bundle(f: &ScalarField, p: &Point<f64>, h: f64) -> Result<DerivativeBundle> {
    bundle_with(f, p, h, gradient)
}

/// As [`wirtinger_bundle`], with one Richardson level.
pub fn wirtinger_bundle_richardson(f: &ScalarField, p: &Point<f64>, h: f64) -> Result<DerivativeBundle> {
    bundle_with(f, p, h, gradient_richardson)
}

pub(crate) fn expect_field(f: &ScalarField, p: &Point<f64>) -> Result<()> {
    if f.model != p.model() || (f.n, f.m) != p.dims() {
        return Err(Error::ModelMismatch(format!(
            "field '{}' lives on {} {}x{}, point is {} {:?}",
            f.id,
            f.model.name(),
            f.n,
            f.m,
            p.model().name(),
            p.dims()
        )));
    }
    Ok(())
}

/// All second Wirtinger derivatives `D_s D_t f` over the 2N symbols, the N
/// holomorphic ones (chart order) followed by their conjugates.
#[derive(Clone, Debug)]
pub struct WirtingerHessian {
    pub k: CMatrix<f64>,
}

impl WirtingerHessian {
    /// From a real Hessian, with `D_s = ½(∂_x + σ_s i∂_y)`, σ = −1 on
    /// holomorphic and +1 on anti-holomorphic symbols.
    pub fn from_real(chart: &Chart, h: &RMatrix<f64>) -> Self {
        let nc = complex_dim(chart);
        let sign = |s: usize| if s < nc { -1.0 } else { 1.0 };
        let k = CMatrix::from_fn(2 * nc, 2 * nc, |s, t| {
            let (xs, ys) = complex_coord(chart, s % nc);
            let (xt, yt) = complex_coord(chart, t % nc);
            let (ss, st) = (sign(s), sign(t));
            Complex::new(h[(xs, xt)] - ss * st * h[(ys, yt)], st * h[(xs, yt)] + ss * h[(ys, xt)]) * 0.25
        });
        Self { k }
    }

    pub fn symbols(&self) -> usize {
        self.k.rows()
    }
}

/// Second derivatives of `f` at `p` with step `h₂` (or `h` if given) and one
/// Richardson level. Refuses points with margin below `4h`.
pub fn wirtinger_hessian(f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<WirtingerHessian> {
    expect_field(f, p)?;
    let chart = f.chart();
    let x = chart.point_coords(p);
    let h = h.unwrap_or_else(|| second_step(&x));
    check_margin(p, 4.0 * h)?;
    let hess = hessian_richardson(&|y| f.eval(y), &x, h);
    finite_or_err(hess.as_slice().iter().copied())?;
    Ok(WirtingerHessian::from_real(&chart, &hess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DiskPoint, Model, UpperPoint};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn disk11(w: Complex<f64>, e: Complex<f64>) -> Point<f64> {
        Point::Disk(
            DiskPoint::new(
                CMatrix::from_row_slice(1, 1, &[w]).unwrap(),
                CMatrix::from_row_slice(1, 1, &[e]).unwrap(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn bundle_of_re_w() {
        let f = ScalarField::new("rew", Model::Disk, 1, 1, |x| x[0]);
        let p = disk11(c(0.2, -0.1), c(1.0, 0.5));
        let b = wirtinger_bundle(&f, &p, 1e-5).unwrap();
        assert!((b.d_mat[(0, 0)] - c(0.5, 0.0)).norm() < 1e-10);
        assert!((b.d_mat_bar[(0, 0)] - c(0.5, 0.0)).norm() < 1e-10);
        assert!(b.d_vec.max_abs() < 1e-10);
    }

    #[test]
    fn bundle_of_y_is_minus_half_i() {
        let f = ScalarField::new("y", Model::Upper, 1, 1, |x| x[1]);
        let p = Point::Upper(UpperPoint::base(1, 1));
        let b = wirtinger_bundle(&f, &p, 1e-5).unwrap();
        assert!((b.d_mat[(0, 0)] - c(0.0, -0.5)).norm() < 1e-10);
    }

    #[test]
    fn off_diagonal_weight_is_half() {
        // f = Re ω₁₂: ∂f/∂ω₁₂ = ½, so both slots of ∂/∂Ω carry ¼.
        let chart = Chart::new(2, 1);
        let i12 = chart.sym_index(0, 1);
        let f = ScalarField::new("re12", Model::Upper, 2, 1, move |x| x[i12]);
        let p = Point::Upper(UpperPoint::base(2, 1));
        let b = wirtinger_bundle(&f, &p, 1e-5).unwrap();
        assert!((b.d_mat[(0, 1)] - c(0.25, 0.0)).norm() < 1e-10);
        assert!((b.d_mat[(1, 0)] - c(0.25, 0.0)).norm() < 1e-10);
        assert!(b.d_mat[(0, 0)].norm() < 1e-10);
    }

    #[test]
    fn vector_part_is_transposed() {
        // n = 1, m = 2: η is 2×1 and ∂/∂η is 1×2.
        let chart = Chart::new(1, 2);
        let re_eta10 = chart.vec_index(1, 0);
        let f = ScalarField::new("re_eta10", Model::Disk, 1, 2, move |x| x[re_eta10]);
        let p = Point::Disk(DiskPoint::origin(1, 2));
        let b = wirtinger_bundle(&f, &p, 1e-5).unwrap();
        assert_eq!(b.d_vec.shape(), (1, 2));
        assert!((b.d_vec[(0, 1)] - c(0.5, 0.0)).norm() < 1e-10);
        assert!(b.d_vec[(0, 0)].norm() < 1e-10);
    }

    #[test]
    fn richardson_bundle_matches_plain_on_polynomials() {
        let f = ScalarField::new("poly", Model::Disk, 2, 1, |x| {
            x[0] * x[1] * x[2] + x[3].powi(3) - 2.0 * x[5] * x[7] + x[8] * x[8]
        });
        let p = crate::geometry::random_point::<f64>(Model::Disk, 2, 1, 5);
        let a = wirtinger_bundle(&f, &p, 1e-5).unwrap();
        let b = wirtinger_bundle_richardson(&f, &p, 1e-5).unwrap();
        assert!(a.dist(&b) < 1e-8);
    }

    #[test]
    fn mixed_wirtinger_of_abs_squared() {
        // f = |w|²: ∂²f/∂w∂w̄ = 1, ∂²f/∂w² = 0.
        let f = ScalarField::new("abs2", Model::Disk, 1, 1, |x| x[0] * x[0] + x[1] * x[1]);
        let p = disk11(c(0.3, 0.4), c(0.0, 0.0));
        let h = wirtinger_hessian(&f, &p, None).unwrap();
        assert_eq!(h.symbols(), 4);
        assert!((h.k[(0, 2)] - c(1.0, 0.0)).norm() < 1e-8);
        assert!(h.k[(0, 0)].norm() < 1e-8);
        // f = Re w²: ∂²f/∂w² = 1.
        let f = ScalarField::new("rew2", Model::Disk, 1, 1, |x| x[0] * x[0] - x[1] * x[1]);
        let h = wirtinger_hessian(&f, &p, None).unwrap();
        assert!((h.k[(0, 0)] - c(1.0, 0.0)).norm() < 1e-8);
        assert!((h.k[(2, 2)] - c(1.0, 0.0)).norm() < 1e-8);
        assert!(h.k[(0, 2)].norm() < 1e-8);
    }

    #[test]
    fn margin_is_enforced() {
        let f = ScalarField::new("c", Model::Disk, 1, 1, |_| 1.0);
        let p = disk11(c(0.99999, 0.0), c(0.0, 0.0));
        assert!(matches!(wirtinger_hessian(&f, &p, None), Err(Error::DomainMargin { .. })));
    }
}
