use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{act_disk, act_upper, Chart, Model, Point, Tangent};
use crate::groups::{JacobiElement, JacobiStarElement};
use crate::operators::{check_margin, first_step, point_scale};

/// A group element together with the model it acts on.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum GroupAction {
    /// G^J acting on H_{n,m}.
    Jacobi(JacobiElement<f64>),
    /// G_*^J acting on D_{n,m}.
    Star(JacobiStarElement<f64>),
}

impl GroupAction {
    pub fn model(&self) -> Model {
        match self {
            GroupAction::Jacobi(_) => Model::Upper,
            GroupAction::Star(_) => Model::Disk,
        }
    }

    pub fn apply(&self, p: &Point<f64>) -> Result<Point<f64>> {
        let out = match self {
            GroupAction::Jacobi(g) => Point::Upper(act_upper(g, p.as_upper()?)?),
            GroupAction::Star(g) => Point::Disk(act_disk(g, p.as_disk()?)?),
        };
        let (a, b) = out.parts();
        Point::from_parts(out.model(), a.clone(), b.clone())
    }

    /// `(g·)` as a map on chart coordinates.
    pub fn coord_map(&self, n: usize, m: usize) -> impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static {
        let chart = Chart::new(n, m);
        let model = self.model();
        let g = self.clone();
        move |x| {
            let p = chart.point_from_coords(model, x)?;
            Ok(chart.point_coords(&g.apply(&p)?))
        }
    }
}

fn difference(map: &dyn Fn(&Point<f64>) -> Result<Point<f64>>, chart: &Chart, model: Model, x: &[f64], v: &[f64], h: f64) -> Result<(Model, Vec<f64>)> {
    let step = |s: f64| -> Result<Point<f64>> {
        let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + s * b).collect();
        map(&chart.point_from_coords(model, &y)?)
    };
    let plus = step(h)?;
    let minus = step(-h)?;
    let out_chart = Chart::new(plus.dims().0, plus.dims().1);
    let a = out_chart.point_coords(&plus);
    let b = out_chart.point_coords(&minus);
    Ok((plus.model(), a.iter().zip(&b).map(|(p, q)| (p - q) / (2.0 * h)).collect()))
}

/// Central-difference differential of a point map at `p` in direction `t`,
/// with one Richardson level. The default step is `h₁/max(1, ‖t‖∞)`.
pub fn pushforward_map(
    map: &dyn Fn(&Point<f64>) -> Result<Point<f64>>,
    p: &Point<f64>,
    t: &Tangent<f64>,
    h: Option<f64>,
) -> Result<Tangent<f64>> {
    t.check_against(p)?;
    let (n, m) = p.dims();
    let chart = Chart::new(n, m);
    let x = chart.point_coords(p);
    let v = chart.tangent_coords(t);
    let h = h.unwrap_or_else(|| first_step(&x) / point_scale(&v).max(1.0));
    check_margin(p, 2.0 * h * point_scale(&v).max(1.0))?;
    let (model, coarse) = difference(map, &chart, p.model(), &x, &v, h)?;
    let (_, fine) = difference(map, &chart, p.model(), &x, &v, h / 2.0)?;
    let d: Vec<f64> = fine.iter().zip(&coarse).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    if !d.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidTangent("non-finite pushforward".into()));
    }
    Ok(chart.tangent_from_coords(model, &d))
}

/// `(g·)_* t` at `p`.
pub fn pushforward(g: &GroupAction, p: &Point<f64>, t: &Tangent<f64>, h: Option<f64>) -> Result<Tangent<f64>> {
    if g.model() != p.model() {
        return Err(Error::ModelMismatch(format!(
            "{} element at a {} point",
            g.model().name(),
            p.model().name()
        )));
    }
    pushforward_map(&|q| g.apply(q), p, t, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::RMatrix;
    use crate::geometry::{random_point, random_tangent_with, UpperPoint};
    use crate::groups::{random::sample_rng, random_jacobi, HeisenbergElement, SpElement};

    #[test]
    fn identity_pushes_forward_to_itself() {
        let p = random_point::<f64>(Model::Disk, 2, 1, 1);
        let t = random_tangent_with(&mut sample_rng(1, 0), Model::Disk, 2, 1);
        let g = GroupAction::Star(JacobiStarElement::identity(2, 1));
        assert!(pushforward(&g, &p, &t, None).unwrap().dist(&t) < 1e-10);
    }

    #[test]
    fn translation_adds_lambda_d_omega() {
        let lam = RMatrix::from_row_slice(1, 2, &[0.5, -1.5]).unwrap();
        let h = HeisenbergElement::new(lam.clone(), RMatrix::zeros(1, 2), RMatrix::zeros(1, 1)).unwrap();
        let g = GroupAction::Jacobi(JacobiElement { sp: SpElement::identity(2), h });
        let p = Point::Upper(UpperPoint::base(2, 1));
        let t = random_tangent_with(&mut sample_rng(2, 0), Model::Upper, 2, 1);
        let out = pushforward(&g, &p, &t, None).unwrap();
        assert!(out.dmat.dist(&t.dmat) < 1e-10);
        let expect = &t.dvec + &(&lam.to_complex() * &t.dmat);
        assert!(out.dvec.dist(&expect) < 1e-9);
    }

    #[test]
    fn linear_in_the_tangent() {
        let p = random_point::<f64>(Model::Upper, 2, 2, 4);
        let g = GroupAction::Jacobi(random_jacobi(2, 2, 4));
        let t = random_tangent_with(&mut sample_rng(4, 0), Model::Upper, 2, 2);
        let one = pushforward(&g, &p, &t, None).unwrap();
        let two = pushforward(&g, &p, &t.scale(2.0), None).unwrap();
        assert!(two.dist(&one.scale(2.0)) <= 1e-6 * (1.0 + two.max_abs()));
    }
}
