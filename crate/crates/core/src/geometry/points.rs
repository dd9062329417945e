use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cmatrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Points closer than this to the boundary (smallest eigenvalue of `Im Ω`
/// or of `I − W̄W`) are rejected.
pub const DOMAIN_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Upper,
    Disk,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Upper => "upper",
            Model::Disk => "disk",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Model::Upper),
            "disk" => Ok(Model::Disk),
            other => Err(Error::InvalidParams(format!("unknown model '{other}'"))),
        }
    }
}

/// `(Ω, Z)` in the Siegel–Jacobi space: Ω symmetric n×n with `Im Ω > 0`,
/// Z an arbitrary m×n matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperPoint<T: Real> {
    pub omega: CMatrix<T>,
    pub z: CMatrix<T>,
}

/// `(W, η)` in the Siegel–Jacobi disk: W symmetric n×n with `I − W̄W > 0`,
/// η an arbitrary m×n matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskPoint<T: Real> {
    pub w: CMatrix<T>,
    pub eta: CMatrix<T>,
}

fn check_pair<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, an: &str, bn: &str) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::InvalidPoint(format!("{an} must be square and non-empty, got {:?}", a.shape())));
    }
    if b.cols() != a.rows() {
        return Err(Error::InvalidPoint(format!(
            "{bn} has {} columns but {an} is {}x{}",
            b.cols(),
            a.rows(),
            a.rows()
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidPoint(format!("{an} or {bn} has non-finite entries")));
    }
    let defect = a.symmetry_defect();
    if !(defect <= T::tol(1e-12) * (T::one() + a.max_abs())) {
        return Err(Error::InvalidPoint(format!("{an} is not symmetric (defect {defect:e})")));
    }
    Ok(())
}

impl<T: Real> UpperPoint<T> {
    pub fn new(omega: CMatrix<T>, z: CMatrix<T>) -> Result<Self> {
        let p = Self { omega, z };
        p.validate()?;
        Ok(p)
    }

    /// `(iI_n, 0)`.
    pub fn base(n: usize, m: usize) -> Self {
        Self {
            omega: CMatrix::identity(n).scale(Complex::new(T::zero(), T::one())),
            z: CMatrix::zeros(m, n),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.omega.rows(), self.z.rows())
    }

    pub fn x(&self) -> RMatrix<T> {
        self.omega.re()
    }

    pub fn y(&self) -> RMatrix<T> {
        self.omega.im()
    }

    pub fn u(&self) -> RMatrix<T> {
        self.z.re()
    }

    pub fn v(&self) -> RMatrix<T> {
        self.z.im()
    }

    /// Smallest eigenvalue of `Im Ω`.
    pub fn margin(&self) -> T {
        self.y().min_hermitian_eigenvalue()
    }

    pub fn validate(&self) -> Result<()> {
        check_pair(&self.omega, &self.z, "omega", "z")?;
        let margin = self.margin();
        if !(margin > T::lit(DOMAIN_MARGIN)) {
            return Err(Error::InvalidPoint(format!(
                "Im(omega) is not positive definite (smallest eigenvalue {margin:e})"
            )));
        }
        Ok(())
    }

    pub fn dist(&self, other: &Self) -> T {
        self.omega.dist(&other.omega).max(self.z.dist(&other.z))
    }
}

impl<T: Real> DiskPoint<T> {
    pub fn new(w: CMatrix<T>, eta: CMatrix<T>) -> Result<Self> {
        let p = Self { w, eta };
        p.validate()?;
        Ok(p)
    }

    /// `(0, 0)`.
    pub fn origin(n: usize, m: usize) -> Self {
        Self {
            w: CMatrix::zeros(n, n),
            eta: CMatrix::zeros(m, n),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.w.rows(), self.eta.rows())
    }

    /// `I − W̄W`.
    pub fn gap(&self) -> CMatrix<T> {
        &CMatrix::identity(self.w.rows()) - &(&self.w.conj() * &self.w)
    }

    /// Smallest eigenvalue of `I − W̄W`.
    pub fn margin(&self) -> T {
        self.gap().min_hermitian_eigenvalue()
    }

    pub fn validate(&self) -> Result<()> {
        check_pair(&self.w, &self.eta, "w", "eta")?;
        let margin = self.margin();
        if !(margin > T::lit(DOMAIN_MARGIN)) {
            return Err(Error::InvalidPoint(format!(
                "I - conj(W) W is not positive definite (smallest eigenvalue {margin:e})"
            )));
        }
        Ok(())
    }

    pub fn dist(&self, other: &Self) -> T {
        self.w.dist(&other.w).max(self.eta.dist(&other.eta))
    }
}

/// A point in either model.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<T: Real> {
    Upper(UpperPoint<T>),
    Disk(DiskPoint<T>),
}

impl<T: Real> Point<T> {
    pub fn model(&self) -> Model {
        match self {
            Point::Upper(_) => Model::Upper,
            Point::Disk(_) => Model::Disk,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            Point::Upper(p) => p.dims(),
            Point::Disk(p) => p.dims(),
        }
    }

    /// The symmetric matrix part and the m×n vector part.
    pub fn parts(&self) -> (&CMatrix<T>, &CMatrix<T>) {
        match self {
            Point::Upper(p) => (&p.omega, &p.z),
            Point::Disk(p) => (&p.w, &p.eta),
        }
    }

    pub fn from_parts(model: Model, mat: CMatrix<T>, vec: CMatrix<T>) -> Result<Self> {
        Ok(match model {
            Model::Upper => Point::Upper(UpperPoint::new(mat, vec)?),
            Model::Disk => Point::Disk(DiskPoint::new(mat, vec)?),
        })
    }

    pub fn margin(&self) -> T {
        match self {
            Point::Upper(p) => p.margin(),
            Point::Disk(p) => p.margin(),
        }
    }

    pub fn as_upper(&self) -> Result<&UpperPoint<T>> {
        match self {
            Point::Upper(p) => Ok(p),
            Point::Disk(_) => Err(Error::ModelMismatch("expected an upper-model point".into())),
        }
    }

    pub fn as_disk(&self) -> Result<&DiskPoint<T>> {
        match self {
            Point::Disk(p) => Ok(p),
            Point::Upper(_) => Err(Error::ModelMismatch("expected a disk-model point".into())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr<T: Real> {
    model: Model,
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", bound = "")]
    w: Option<CMatrix<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none", bound = "")]
    eta: Option<CMatrix<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none", bound = "")]
    omega: Option<CMatrix<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none", bound = "")]
    z: Option<CMatrix<T>>,
}

impl<T: Real> Serialize for Point<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (n, m) = self.dims();
        let mut repr = PointRepr {
            model: self.model(),
            n,
            m,
            w: None,
            eta: None,
            omega: None,
            z: None,
        };
        match self {
            Point::Upper(p) => {
                repr.omega = Some(p.omega.clone());
                repr.z = Some(p.z.clone());
            }
            Point::Disk(p) => {
                repr.w = Some(p.w.clone());
                repr.eta = Some(p.eta.clone());
            }
        }
        repr.serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for Point<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PointRepr::<T>::deserialize(deserializer)?;
        let (mat, vec, names) = match repr.model {
            Model::Upper => (repr.omega, repr.z, ("omega", "z")),
            Model::Disk => (repr.w, repr.eta, ("w", "eta")),
        };
        let mat = mat.ok_or_else(|| D::Error::missing_field(names.0))?;
        let vec = vec.ok_or_else(|| D::Error::missing_field(names.1))?;
        if mat.rows() != repr.n || vec.rows() != repr.m {
            return Err(D::Error::custom(format!(
                "declared n={}, m={} but {} is {:?} and {} is {:?}",
                repr.n,
                repr.m,
                names.0,
                mat.shape(),
                names.1,
                vec.shape()
            )));
        }
        Point::from_parts(repr.model, mat, vec).map_err(D::Error::custom)
    }
}

/// A tangent vector: `(dΩ, dZ)` in the upper model or `(dW, dη)` in the disk
/// model. `dmat` is symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Tangent<T: Real> {
    pub model: Model,
    pub dmat: CMatrix<T>,
    pub dvec: CMatrix<T>,
}

impl<T: Real> Tangent<T> {
    pub fn new(model: Model, dmat: CMatrix<T>, dvec: CMatrix<T>) -> Result<Self> {
        let t = Self { model, dmat, dvec };
        t.validate()?;
        Ok(t)
    }

    pub fn zero(model: Model, n: usize, m: usize) -> Self {
        Self {
            model,
            dmat: CMatrix::zeros(n, n),
            dvec: CMatrix::zeros(m, n),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dmat.rows(), self.dvec.rows())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dmat.is_square() || self.dvec.cols() != self.dmat.rows() {
            return Err(Error::InvalidTangent(format!(
                "shapes {:?} and {:?} do not form a tangent vector",
                self.dmat.shape(),
                self.dvec.shape()
            )));
        }
        if !self.dmat.is_finite() || !self.dvec.is_finite() {
            return Err(Error::InvalidTangent("non-finite entries".into()));
        }
        let defect = self.dmat.symmetry_defect();
        if !(defect <= T::tol(1e-12) * (T::one() + self.dmat.max_abs())) {
            return Err(Error::InvalidTangent(format!("matrix part is not symmetric (defect {defect:e})")));
        }
        Ok(())
    }

    pub fn check_against(&self, p: &Point<T>) -> Result<()> {
        if self.model != p.model() {
            return Err(Error::ModelMismatch(format!(
                "{} tangent at a {} point",
                self.model.name(),
                p.model().name()
            )));
        }
        if self.dims() != p.dims() {
            return Err(Error::InvalidTangent(format!(
                "tangent dims {:?} differ from point dims {:?}",
                self.dims(),
                p.dims()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            model: self.model,
            dmat: self.dmat.scale_re(s),
            dvec: self.dvec.scale_re(s),
        }
    }

    pub fn dist(&self, other: &Self) -> T {
        self.dmat.dist(&other.dmat).max(self.dvec.dist(&other.dvec))
    }

    pub fn max_abs(&self) -> T {
        self.dmat.max_abs().max(self.dvec.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn base_points_are_valid() {
        UpperPoint::<f64>::base(3, 2).validate().unwrap();
        DiskPoint::<f64>::origin(3, 2).validate().unwrap();
        assert!((DiskPoint::<f64>::origin(2, 1).margin() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_domain() {
        let w = CMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]).unwrap();
        assert!(DiskPoint::new(w, CMatrix::zeros(1, 1)).is_err());
        let omega = CMatrix::from_row_slice(1, 1, &[c(0.0, -1.0)]).unwrap();
        assert!(UpperPoint::new(omega, CMatrix::zeros(1, 1)).is_err());
        let asym = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.1, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(UpperPoint::new(asym, CMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn point_json_roundtrip() {
        let p = Point::Disk(DiskPoint::<f64>::origin(1, 1));
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"model":"disk","n":1,"m":1,"w":"#));
        let back: Point<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = s.replace(r#""n":1"#, r#""n":2"#);
        assert!(serde_json::from_str::<Point<f64>>(&bad).is_err());
        let outside = r#"{"model":"disk","n":1,"m":1,"w":{"rows":1,"cols":1,"data":[[2,0]]},"eta":{"rows":1,"cols":1,"data":[[0,0]]}}"#;
        let err = serde_json::from_str::<Point<f64>>(outside).unwrap_err().to_string();
        assert!(err.contains("positive definite"), "{err}");
    }
}
