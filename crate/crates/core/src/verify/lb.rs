use crate::error::{Error, Result};
use crate::geometry::{Chart, Point};
use crate::metrics::{metric_tensor, MetricKind, MetricTensor};
use crate::operators::{check_margin, gradient, point_scale, ScalarField};

/// `Δf = |g|^{-1/2} Σᵢ ∂ᵢ(|g|^{1/2} gⁱʲ ∂ⱼ f)` at `p`, from any tensor field.
///
/// The tensor may cover only the leading `d` chart coordinates (a
/// matrix-only metric); the remaining coordinates are held fixed. Inner
/// derivatives of `f` use central differences with `h_in = 1e-5·(1+scale)`;
/// the outer divergence uses `h_out = 1e-3·(1+scale)` (or `h`) with one
/// Richardson level. `|g|` is normalized by its value at `p`.
pub fn laplace_beltrami(
    f: &ScalarField,
    p: &Point<f64>,
    metric: &dyn Fn(&Point<f64>) -> Result<MetricTensor<f64>>,
    h: Option<f64>,
) -> Result<f64> {
    if f.model != p.model() || (f.n, f.m) != p.dims() {
        return Err(Error::ModelMismatch(format!("field '{}' does not live at this point", f.id)));
    }
    let chart = Chart::new(f.n, f.m);
    let model = p.model();
    let x0 = chart.point_coords(p);
    let scale = point_scale(&x0);
    let h_out = h.unwrap_or(1e-3 * (1.0 + scale));
    let h_in = 1e-5 * (1.0 + scale);
    check_margin(p, 4.0 * h_out)?;
    let g0 = metric(p)?;
    let d = g0.dim;
    let det0 = g0.g.determinant()?;
    if !(det0 > 0.0) {
        return Err(Error::InvalidParams(format!("metric determinant {det0:e} is not positive")));
    }

    // Fᵢ(x) = √(|g(x)|/|g(p)|) Σⱼ gⁱʲ(x) ∂ⱼf(x) over the leading d coordinates.
    let flux = |x: &[f64]| -> Result<Vec<f64>> {
        let q = chart.point_from_coords(model, x)?;
        let g = metric(&q)?;
        let ginv = g.g.inverse()?;
        let ratio = g.g.determinant()? / det0;
        if !(ratio > 0.0) {
            return Err(Error::InvalidParams("metric determinant changes sign".into()));
        }
        let head = |y: &[f64]| {
            let mut full = x.to_vec();
            full[..d].copy_from_slice(y);
            f.eval(&full)
        };
        let df = gradient(&head, &x[..d], h_in);
        let s = ratio.sqrt();
        Ok((0..d).map(|i| s * (0..d).map(|j| ginv[(i, j)] * df[j]).sum::<f64>()).collect())
    };

    let divergence = |step: f64| -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..d {
            let mut xp = x0.clone();
            xp[i] += step;
            let mut xm = x0.clone();
            xm[i] -= step;
            acc += (flux(&xp)?[i] - flux(&xm)?[i]) / (2.0 * step);
        }
        Ok(acc)
    };
    let coarse = divergence(h_out)?;
    let fine = divergence(h_out / 2.0)?;
    let out = (4.0 * fine - coarse) / 3.0;
    if !out.is_finite() {
        return Err(Error::InvalidPoint("Laplace-Beltrami value is not finite".into()));
    }
    Ok(out)
}

/// [`laplace_beltrami`] of one of the invariant metrics.
pub fn laplace_beltrami_of(kind: MetricKind<f64>, f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<f64> {
    laplace_beltrami(f, p, &|q| metric_tensor(kind, q), h)
}
