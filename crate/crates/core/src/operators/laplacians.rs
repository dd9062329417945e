use std::str::FromStr;

use num_complex::Complex;

use super::fd::{wirtinger_hessian, WirtingerHessian};
use super::field::ScalarField;
use super::symbol::{LinOp, QuadOp, Symbol};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Chart, DiskPoint, Model, Point, UpperPoint};
use crate::metrics::MetricParams;

type C = Complex<f64>;

/// How the vector-coupling part of the full Laplacians is read.
///
/// `Symmetrized` replaces `∂/∂Ω` by `E = ∂/∂Ω + sym(∂/∂Z·V·Y⁻¹)` inside the
/// Maass operator (and `∂/∂W` by `∂/∂W + sym(∂/∂η·(η̄ − ηW̄)(I − WW̄)⁻¹)` on
/// the disk); this equals the Laplace–Beltrami operator for every n.
/// `Printed` expands the same expression term by term without the
/// symmetrization, which is exact for n = 1 only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reading {
    #[default]
    Symmetrized,
    Printed,
}

impl FromStr for Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetrized" => Ok(Reading::Symmetrized),
            "printed" => Ok(Reading::Printed),
            other => Err(Error::InvalidParams(format!("unknown reading '{other}' (symmetrized|printed)"))),
        }
    }
}

/// The four invariant pieces of the full Laplacians at A = B = 1:
/// `¼Δ_{n,m;1,1} = L + D` upstairs and `Δ̃_{n,m;1,1} = L̃ + D̃` on the disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    D,
    L,
    Dtilde,
    Ltilde,
}

impl OpKind {
    pub fn model(self) -> Model {
        match self {
            OpKind::D | OpKind::L => Model::Upper,
            OpKind::Dtilde | OpKind::Ltilde => Model::Disk,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::D => "D",
            OpKind::L => "L",
            OpKind::Dtilde => "Dtilde",
            OpKind::Ltilde => "Ltilde",
        }
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" => Ok(OpKind::D),
            "L" => Ok(OpKind::L),
            "Dtilde" => Ok(OpKind::Dtilde),
            "Ltilde" => Ok(OpKind::Ltilde),
            other => Err(Error::InvalidParams(format!("unknown operator '{other}' (D|L|Dtilde|Ltilde)"))),
        }
    }
}

/// A second-order operator with point-dependent coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Operator {
    /// `Δ_n = 4σ(Y ᵗ(Y∂/∂Ω̄) ∂/∂Ω)` on H_n.
    Siegel,
    /// `Δ_* = σ((I−WW̄) ᵗ((I−WW̄)∂/∂W̄) ∂/∂W)` on D_n.
    DiskN,
    /// `Δ_{n,m;A,B}` on H_{n,m}.
    Upper(MetricParams<f64>, Reading),
    /// `Δ̃_{n,m;A,B}` on D_{n,m}.
    Disk(MetricParams<f64>, Reading),
    Invariant(OpKind, Reading),
}

impl Operator {
    pub fn model(&self) -> Model {
        match self {
            Operator::Siegel | Operator::Upper(..) => Model::Upper,
            Operator::DiskN | Operator::Disk(..) => Model::Disk,
            Operator::Invariant(k, _) => k.model(),
        }
    }

    /// The coefficient matrix over the Wirtinger symbols at `p`.
    pub fn symbol(&self, p: &Point<f64>) -> Result<Symbol> {
        if p.model() != self.model() {
            return Err(Error::ModelMismatch(format!(
                "{} operator at a {} point",
                self.model().name(),
                p.model().name()
            )));
        }
        let (n, m) = p.dims();
        let chart = Chart::new(n, m);
        Ok(match *self {
            Operator::Siegel => UpperParts::new(&chart, p.as_upper()?)?.maass().scale(4.0),
            Operator::DiskN => DiskParts::new(&chart, p.as_disk()?)?.maass(),
            Operator::Upper(params, reading) => {
                let u = UpperParts::new(&chart, p.as_upper()?)?;
                u.l(reading).scale(4.0 / params.a).add(&u.d().scale(4.0 / params.b))
            }
            Operator::Disk(params, reading) => {
                let d = DiskParts::new(&chart, p.as_disk()?)?;
                d.l(reading).scale(1.0 / params.a).add(&d.d().scale(1.0 / params.b))
            }
            Operator::Invariant(kind, reading) => match kind {
                OpKind::D => UpperParts::new(&chart, p.as_upper()?)?.d(),
                OpKind::L => UpperParts::new(&chart, p.as_upper()?)?.l(reading),
                OpKind::Dtilde => DiskParts::new(&chart, p.as_disk()?)?.d(),
                OpKind::Ltilde => DiskParts::new(&chart, p.as_disk()?)?.l(reading),
            },
        })
    }

    /// Applies the operator to precomputed second derivatives.
    pub fn contract(&self, p: &Point<f64>, h: &WirtingerHessian) -> Result<C> {
        Ok(self.symbol(p)?.apply(h))
    }

    /// `(Op f)(p)` before the realness check.
    pub fn apply_complex(&self, f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<C> {
        let hess = wirtinger_hessian(f, p, h)?;
        self.contract(p, &hess)
    }

    /// `(Op f)(p)`; fails with `NonRealForm` if `|Im| > 1e-6·(1 + |Re|)`.
    pub fn apply(&self, f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<f64> {
        real_part(self.apply_complex(f, p, h)?)
    }
}

pub(crate) fn real_part(v: C) -> Result<f64> {
    if !(v.im.abs() <= 1e-6 * (1.0 + v.re.abs())) {
        return Err(Error::NonRealForm { real: v.re, imag: v.im });
    }
    Ok(v.re)
}

struct UpperParts {
    y: CMatrix<f64>,
    yinv: CMatrix<f64>,
    v: CMatrix<f64>,
    d_om: LinOp,
    d_omb: LinOp,
    d_z: LinOp,
    d_zb: LinOp,
}

impl UpperParts {
    fn new(chart: &Chart, p: &UpperPoint<f64>) -> Result<Self> {
        let y = p.y().to_complex();
        Ok(Self {
            yinv: y.inverse()?,
            y,
            v: p.v().to_complex(),
            d_om: LinOp::d_mat(chart, false),
            d_omb: LinOp::d_mat(chart, true),
            d_z: LinOp::d_vec(chart, false),
            d_zb: LinOp::d_vec(chart, true),
        })
    }

    /// `σ(Y ᵗ(Y F̄) F)`.
    fn maass_with(&self, f: &LinOp, fb: &LinOp) -> Symbol {
        let inner = LinOp::left(&self.y, &LinOp::left(&self.y, fb).transpose());
        inner.then(f).trace()
    }

    fn maass(&self) -> Symbol {
        self.maass_with(&self.d_om, &self.d_omb)
    }

    /// `σ(Y ∂/∂Z ᵗ(∂/∂Z̄))`.
    fn d(&self) -> Symbol {
        LinOp::left(&self.y, &self.d_z).then(&self.d_zb.transpose()).trace()
    }

    fn l(&self, reading: Reading) -> Symbol {
        match reading {
            Reading::Symmetrized => {
                let vy = &self.v * &self.yinv;
                let e = self.d_om.add(&self.d_z.right(&vy).sym());
                let eb = self.d_omb.add(&self.d_zb.right(&vy).sym());
                self.maass_with(&e, &eb)
            }
            Reading::Printed => {
                let yzb_t = LinOp::left(&self.y, &self.d_zb).transpose();
                let yomb_t = LinOp::left(&self.y, &self.d_omb).transpose();
                let vyv = &(&self.v * &self.yinv) * &self.v.transpose();
                let t2 = QuadOp::left(&vyv, &yzb_t.then(&self.d_z)).trace();
                let t3 = QuadOp::left(&self.v, &yomb_t.then(&self.d_z)).trace();
                let t4 = QuadOp::left(&self.v.transpose(), &yzb_t.then(&self.d_om)).trace();
                self.maass().add(&t2).add(&t3).add(&t4)
            }
        }
    }
}

struct DiskParts {
    w: CMatrix<f64>,
    eta: CMatrix<f64>,
    /// `I − WW̄`
    s1: CMatrix<f64>,
    /// `I − W̄W`
    s2: CMatrix<f64>,
    r1: CMatrix<f64>,
    r2: CMatrix<f64>,
    d_w: LinOp,
    d_wb: LinOp,
    d_e: LinOp,
    d_eb: LinOp,
}

impl DiskParts {
    fn new(chart: &Chart, p: &DiskPoint<f64>) -> Result<Self> {
        let id = CMatrix::identity(chart.n);
        let wb = p.w.conj();
        let s1 = &id - &(&p.w * &wb);
        let s2 = &id - &(&wb * &p.w);
        Ok(Self {
            w: p.w.clone(),
            eta: p.eta.clone(),
            r1: s1.inverse()?,
            r2: s2.inverse()?,
            s1,
            s2,
            d_w: LinOp::d_mat(chart, false),
            d_wb: LinOp::d_mat(chart, true),
            d_e: LinOp::d_vec(chart, false),
            d_eb: LinOp::d_vec(chart, true),
        })
    }

    /// `σ((I−WW̄) ᵗ((I−WW̄) F̄) F)`.
    fn maass_with(&self, f: &LinOp, fb: &LinOp) -> Symbol {
        let inner = LinOp::left(&self.s1, &LinOp::left(&self.s1, fb).transpose());
        inner.then(f).trace()
    }

    fn maass(&self) -> Symbol {
        self.maass_with(&self.d_w, &self.d_wb)
    }

    /// `σ((I−W̄W) ∂/∂η ᵗ(∂/∂η̄))`.
    fn d(&self) -> Symbol {
        LinOp::left(&self.s2, &self.d_e).then(&self.d_eb.transpose()).trace()
    }

    fn l(&self, reading: Reading) -> Symbol {
        let w = &self.w;
        let wb = w.conj();
        let eta = &self.eta;
        let etab = eta.conj();
        match reading {
            Reading::Symmetrized => {
                // a = (η̄ − ηW̄)(I − WW̄)⁻¹
                let a = &(&etab - &(eta * &wb)) * &self.r1;
                let e = self.d_w.add(&self.d_e.right(&a).sym());
                let eb = self.d_wb.add(&self.d_eb.right(&a.conj()).sym());
                self.maass_with(&e, &eb)
            }
            Reading::Printed => {
                let ebt = self.d_eb.transpose();
                let t2 = QuadOp::left(
                    &(eta - &(&etab * w)).transpose(),
                    &ebt.then(&LinOp::left(&self.s2, &self.d_w)),
                )
                .trace();
                let s1wb_t = LinOp::left(&self.s1, &self.d_wb).transpose();
                let t3 = QuadOp::left(&(&etab - &(eta * &wb)), &s1wb_t.then(&self.d_e)).trace();
                let et = eta.transpose();
                let ebt_c = etab.transpose();
                let m4 = &(&(eta * &wb) * &self.r1) * &et;
                let m5 = &(&(&etab * w) * &self.r2) * &ebt_c;
                let m6 = &(&etab * &self.r1) * &et;
                let m7 = &(&(&(eta * &wb) * w) * &self.r2) * &ebt_c;
                let mm = &(&(&m6 + &m7) - &m4) - &m5;
                let t47 = QuadOp::left(&mm, &ebt.then(&LinOp::left(&self.s2, &self.d_e))).trace();
                self.maass().add(&t2).add(&t3).add(&t47)
            }
        }
    }
}

/// `Δ_n f` at the matrix part of `p`.
pub fn lap_siegel(f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<f64> {
    Operator::Siegel.apply(f, p, h)
}

pub fn lap_upper(f: &ScalarField, p: &Point<f64>, params: MetricParams<f64>, reading: Reading, h: Option<f64>) -> Result<f64> {
    Operator::Upper(params, reading).apply(f, p, h)
}

pub fn lap_disk_n(f: &ScalarField, p: &Point<f64>, h: Option<f64>) -> Result<f64> {
    Operator::DiskN.apply(f, p, h)
}

pub fn lap_disk(f: &ScalarField, p: &Point<f64>, params: MetricParams<f64>, reading: Reading, h: Option<f64>) -> Result<f64> {
    Operator::Disk(params, reading).apply(f, p, h)
}

pub fn op_invariant(kind: OpKind, f: &ScalarField, p: &Point<f64>, reading: Reading, h: Option<f64>) -> Result<f64> {
    Operator::Invariant(kind, reading).apply(f, p, h)
}
