use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::forms::{q_disk_n, q_siegel, DiskForm, UpperForm};
use super::MetricParams;
use crate::cmatrix::{symmetric_eigenvalues, RMatrix};
use crate::error::{Error, Result};
use crate::geometry::{Chart, Model, Point, Tangent, ORDERING_TAG};
use crate::scalar::Real;

/// Which line element to realize.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricKind<T: Real> {
    /// `σ(Y⁻¹dΩY⁻¹dΩ̄)` on H_n.
    Siegel,
    /// `4σ((I−WW̄)⁻¹dW(I−W̄W)⁻¹dW̄)` on D_n.
    DiskN,
    /// The A, B metric on H_{n,m}.
    Upper(MetricParams<T>),
    /// The A, B metric on D_{n,m}.
    Disk(MetricParams<T>),
}

impl<T: Real> MetricKind<T> {
    pub fn model(&self) -> Model {
        match self {
            MetricKind::Siegel | MetricKind::Upper(_) => Model::Upper,
            MetricKind::DiskN | MetricKind::Disk(_) => Model::Disk,
        }
    }

    /// The chart the tensor is expressed in; the matrix-only metrics use no
    /// vector coordinates.
    pub fn chart(&self, n: usize, m: usize) -> Chart {
        match self {
            MetricKind::Siegel | MetricKind::DiskN => Chart::new(n, 0),
            _ => Chart::new(n, m),
        }
    }

    /// Returns `t ↦ ds²(t)` at `p`, with the point factors computed once.
    pub fn evaluator<'a>(&self, p: &'a Point<T>) -> Result<Box<dyn Fn(&Tangent<T>) -> Result<T> + 'a>> {
        if p.model() != self.model() {
            return Err(Error::ModelMismatch(format!(
                "{} metric at a {} point",
                self.model().name(),
                p.model().name()
            )));
        }
        Ok(match *self {
            MetricKind::Siegel => {
                let omega = p.parts().0;
                Box::new(move |t| q_siegel(omega, t))
            }
            MetricKind::DiskN => {
                let w = p.parts().0;
                Box::new(move |t| q_disk_n(w, t))
            }
            MetricKind::Upper(params) => {
                let form = UpperForm::new(p.as_upper()?, params)?;
                Box::new(move |t| form.eval(t))
            }
            MetricKind::Disk(params) => {
                let form = DiskForm::new(p.as_disk()?, params)?;
                Box::new(move |t| form.eval(t))
            }
        })
    }
}

/// A metric as a real symmetric matrix in the canonical chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTensor<T: Real> {
    pub dim: usize,
    pub g: RMatrix<T>,
}

impl<T: Real> MetricTensor<T> {
    /// `ᵗv·G·v`.
    pub fn quadratic(&self, v: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += v[i] * self.g[(i, j)] * v[j];
            }
        }
        acc
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        symmetric_eigenvalues(&self.g)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().into_iter().fold(T::infinity(), |a, b| a.min(b))
    }

    pub fn symmetry_defect(&self) -> T {
        self.g.symmetry_defect()
    }
}

impl<T: Real> Serialize for MetricTensor<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.g[(i, j)].as_f64()).collect())
            .collect();
        let mut s = serializer.serialize_struct("MetricTensor", 3)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("ordering", ORDERING_TAG)?;
        s.serialize_field("g", &rows)?;
        s.end()
    }
}

/// Polarization `G_ij = ¼(Q(e_i + e_j) − Q(e_i − e_j))` over the canonical basis.
pub fn metric_tensor<T: Real>(kind: MetricKind<T>, p: &Point<T>) -> Result<MetricTensor<T>> {
    let (n, m) = p.dims();
    let chart = kind.chart(n, m);
    let model = kind.model();
    let q = kind.evaluator(p)?;
    let dim = chart.dim();
    let eval = |v: &[T]| q(&chart.tangent_from_coords(model, v));
    let mut g = RMatrix::zeros(dim, dim);
    let mut v = vec![T::zero(); dim];
    for i in 0..dim {
        v[i] = T::one();
        g[(i, i)] = eval(&v)?;
        for j in i + 1..dim {
            v[j] = T::one();
            let plus = eval(&v)?;
            v[j] = -T::one();
            let minus = eval(&v)?;
            v[j] = T::zero();
            let gij = (plus - minus) * T::lit(0.25);
            g[(i, j)] = gij;
            g[(j, i)] = gij;
        }
        v[i] = T::zero();
    }
    Ok(MetricTensor { dim, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_point, DiskPoint};

    #[test]
    fn disk_origin_is_four_times_identity() {
        let p = Point::Disk(DiskPoint::<f64>::origin(1, 1));
        let g = metric_tensor(MetricKind::Disk(MetricParams::unit()), &p).unwrap();
        assert_eq!(g.dim, 4);
        assert!(g.g.dist(&RMatrix::identity(4).scale(4.0)) < 1e-14);
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.starts_with(r#"{"dim":4,"ordering":"canonical-v1","g":[[4.0,0.0,0.0,0.0]"#), "{json}");
    }

    #[test]
    fn tensor_reproduces_the_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for (model, kind) in [
            (Model::Upper, MetricKind::Upper(MetricParams::new(0.7, 1.9).unwrap())),
            (Model::Disk, MetricKind::Disk(MetricParams::new(1.3, 0.4).unwrap())),
            (Model::Upper, MetricKind::Siegel),
            (Model::Disk, MetricKind::DiskN),
        ] {
            let p = random_point::<f64>(model, 2, 2, 17);
            let g = metric_tensor(kind, &p).unwrap();
            let q = kind.evaluator(&p).unwrap();
            let chart = kind.chart(2, 2);
            for _ in 0..50 {
                let v: Vec<f64> = (0..g.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let direct = q(&chart.tangent_from_coords(model, &v)).unwrap();
                assert!((g.quadratic(&v) - direct).abs() < 1e-9 * (1.0 + direct.abs()));
            }
            assert!(g.min_eigenvalue() > 0.0);
        }
    }
}
