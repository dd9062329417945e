use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::cmatrix::RMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Chart, Model};
use crate::groups::random::sample_rng;

type Rule = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real smooth function on one model, expressed on canonical chart
/// coordinates of `(n, m)`.
#[derive(Clone)]
pub struct ScalarField {
    pub id: String,
    pub model: Model,
    pub n: usize,
    pub m: usize,
    rule: Rule,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({} on {} {}x{})", self.id, self.model.name(), self.n, self.m)
    }
}

impl ScalarField {
    pub fn new(
        id: impl Into<String>,
        model: Model,
        n: usize,
        m: usize,
        rule: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            model,
            n,
            m,
            rule: Arc::new(rule),
        }
    }

    pub fn chart(&self) -> Chart {
        Chart::new(self.n, self.m)
    }

    pub fn eval(&self, coords: &[f64]) -> f64 {
        (self.rule)(coords)
    }

    /// `f ∘ φ` for a coordinate map `φ`; the map must preserve the chart.
    /// Off-domain images evaluate to NaN.
    pub fn compose(&self, id: impl Into<String>, map: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static) -> Self {
        let inner = Arc::clone(&self.rule);
        Self::new(id, self.model, self.n, self.m, move |x| match map(x) {
            Ok(y) => inner(&y),
            Err(_) => f64::NAN,
        })
    }

    /// `x ↦ f(x_mat, 0)`: the field restricted to the matrix variable and
    /// extended constantly in the vector variable.
    pub fn matrix_only(&self) -> Self {
        let head = 2 * self.chart().sym_len();
        self.compose(format!("{}|mat", self.id), move |x| {
            let mut y = x.to_vec();
            y[head..].iter_mut().for_each(|v| *v = 0.0);
            Ok(y)
        })
    }

    /// The same function viewed on the other model through a coordinate map.
    pub fn pulled_to(&self, model: Model, id: impl Into<String>, map: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static) -> Self {
        let mut out = self.compose(id, map);
        out.model = model;
        out
    }
}

fn real_sym(chart: &Chart, x: &[f64], imag: bool) -> RMatrix<f64> {
    let s = chart.sym_len();
    let off = if imag { s } else { 0 };
    let mut out = RMatrix::zeros(chart.n, chart.n);
    for (i, (mu, nu)) in chart.sym_pairs().into_iter().enumerate() {
        out[(mu, nu)] = x[off + i];
        out[(nu, mu)] = x[off + i];
    }
    out
}

/// The deterministic test suite for `(model, n, m)`: the constant field
/// first, then non-constant fields (linear, two quadratic or log-trace
/// fields, a wide Gaussian bump, a product).
pub fn test_field_suite(model: Model, n: usize, m: usize, seed: u64) -> Vec<ScalarField> {
    let chart = Chart::new(n, m);
    let dim = chart.dim();
    let s = chart.sym_len();
    let mn = m * n;
    let mut rng = sample_rng(seed, 0xF1E1D);
    let coef: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let center: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let lam: Vec<f64> = (0..2 * mn).map(|_| rng.gen_range(-1.0..1.0)).collect();

    let mut out = vec![ScalarField::new("const", model, n, m, |_| 1.7)];
    out.push(ScalarField::new("linear", model, n, m, move |x| {
        x.iter().zip(&coef).map(|(a, b)| a * b).sum()
    }));
    match model {
        Model::Upper => {
            out.push(ScalarField::new("trY", model, n, m, move |x| (0..n).map(|i| x[s + chart.sym_index(i, i)]).sum()));
            out.push(ScalarField::new("logdetY", model, n, m, move |x| {
                real_sym(&chart, x, true).determinant().map_or(f64::NAN, f64::ln)
            }));
            out.push(ScalarField::new("trYY", model, n, m, move |x| {
                let y = real_sym(&chart, x, true);
                (&y * &y).trace()
            }));
        }
        Model::Disk => {
            // σ(WW̄) and σ(η ᵗη̄), both real.
            out.push(ScalarField::new("absW2", model, n, m, move |x| {
                let (w, _) = chart.decode(x);
                (&w * &w.conj()).trace().re
            }));
            out.push(ScalarField::new("abseta2", model, n, m, move |x| {
                x[2 * s..].iter().map(|v| v * v).sum()
            }));
            out.push(ScalarField::new("trgap2", model, n, m, move |x| {
                let (w, _) = chart.decode(x);
                let g = &crate::cmatrix::CMatrix::identity(n) - &(&w.conj() * &w);
                (&g * &g).trace().re
            }));
        }
    }
    out.push(ScalarField::new("gauss", model, n, m, move |x| {
        let d2: f64 = x.iter().zip(&center).map(|(a, c)| (a - c) * (a - c)).sum();
        (-0.25 * d2 / dim as f64).exp()
    }));
    // Re σ(A) · Im Σ b_kl λ_kl with A the matrix part, b the vector part.
    out.push(ScalarField::new("product", model, n, m, move |x| {
        let tr: f64 = (0..n).map(|i| x[chart.sym_index(i, i)]).sum();
        let mut im = 0.0;
        for j in 0..mn {
            let (re_b, im_b) = (x[2 * s + j], x[2 * s + mn + j]);
            im += re_b * lam[mn + j] + im_b * lam[j];
        }
        tr * im
    }));
    out
}

/// Looks up a suite member by identifier.
pub fn field_by_id(id: &str, model: Model, n: usize, m: usize, seed: u64) -> Result<ScalarField> {
    test_field_suite(model, n, m, seed)
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| {
            let known: Vec<String> = test_field_suite(model, n, m, seed).into_iter().map(|f| f.id).collect();
            Error::UnknownField(format!("'{id}' for the {} model (known: {})", model.name(), known.join(", ")))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::random_point;

    #[test]
    fn suite_is_deterministic_and_starts_with_constant() {
        let a = test_field_suite(Model::Disk, 2, 1, 3);
        let b = test_field_suite(Model::Disk, 2, 1, 3);
        assert_eq!(a[0].id, "const");
        let p = random_point::<f64>(Model::Disk, 2, 1, 9);
        let x = Chart::new(2, 1).point_coords(&p);
        for (f, g) in a.iter().zip(&b) {
            assert_eq!(f.eval(&x), g.eval(&x));
        }
    }

    #[test]
    fn known_values() {
        // W = 0.5 + 0.5i, η = 1 − 2i
        let x = [0.5, 0.5, 1.0, -2.0];
        assert!((field_by_id("absW2", Model::Disk, 1, 1, 0).unwrap().eval(&x) - 0.5).abs() < 1e-15);
        assert!((field_by_id("abseta2", Model::Disk, 1, 1, 0).unwrap().eval(&x) - 5.0).abs() < 1e-15);
        let y = [0.3, 2.0, 0.0, 0.0];
        assert!((field_by_id("logdetY", Model::Upper, 1, 1, 0).unwrap().eval(&y) - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(field_by_id("nope", Model::Disk, 1, 1, 0), Err(Error::UnknownField(_))));
    }
}
