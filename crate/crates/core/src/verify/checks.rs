use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::closed::{laplacian_11, quarter_metric_11};
use super::lb::laplace_beltrami_of;
use super::pushforward::{pushforward, pushforward_map, GroupAction};
use super::report::{CheckReport, PartReport};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::geometry::{
    act_disk, act_disk_n, act_siegel, act_upper, cayley, cayley_differential, cayley_imaginary_parts, cayley_inv,
    check_cayley_compat, hc_pplus_component, random_disk_point_with, random_tangent_with, random_upper_point_with, Chart,
    DiskPoint, Model, Point, UpperPoint,
};
use crate::groups::random::{random_heisenberg_with, random_jacobi_star_with, random_jacobi_with, sample_rng};
use crate::groups::{theta_conjugation_residual, theta_inv, theta_map, HeisenbergElement, JacobiElement, JacobiStarElement};
use crate::metrics::{metric_tensor, q_disk, q_disk_n, q_siegel, q_upper, MetricKind, MetricParams};
use crate::operators::{
    first_step, test_field_suite, wirtinger_bundle_richardson, wirtinger_hessian, OpKind, Operator, Reading, ScalarField,
};

/// Every check, in suite order.
pub const CHECK_NAMES: [&str; 17] = [
    "group-laws",
    "theta-hom",
    "action-axioms",
    "cayley-roundtrip",
    "cayley-compat",
    "metric-invariance-upper",
    "metric-invariance-disk",
    "cayley-isometry",
    "tensor-pd",
    "lb-equivalence-upper",
    "lb-equivalence-disk",
    "lb-equivalence-siegel",
    "lb-equivalence-diskn",
    "laplacian-invariance",
    "remark41-invariance",
    "reduce-n1m1",
    "pushforward-identities",
];

/// Redraws allowed per sample when a point is too close to the boundary.
pub const MAX_RETRIES: u32 = 10;

/// Default relative tolerance of a check.
pub fn default_tol(name: &str) -> Result<f64> {
    Ok(match name {
        "group-laws" | "theta-hom" | "cayley-roundtrip" => 1e-10,
        "action-axioms" | "cayley-compat" | "tensor-pd" => 1e-9,
        "metric-invariance-upper" | "metric-invariance-disk" | "cayley-isometry" => 1e-5,
        "lb-equivalence-upper" | "lb-equivalence-disk" | "lb-equivalence-siegel" | "lb-equivalence-diskn" => 1e-3,
        "laplacian-invariance" | "remark41-invariance" => 1e-3,
        "reduce-n1m1" | "pushforward-identities" => 1e-6,
        other => return Err(Error::UnknownCheck(other.to_string())),
    })
}

/// Tolerance of a part relative to the check tolerance. Parts not listed
/// use the check tolerance itself.
fn part_ratio(check: &str, part: &str) -> f64 {
    match (check, part) {
        ("reduce-n1m1", "metric") => 1e-6,
        ("pushforward-identities", "Y" | "V") => 1e-4,
        ("pushforward-identities", "chain-rule-mat" | "chain-rule-vec") => 100.0,
        _ => 1.0,
    }
}

/// `|l − r| / (1 + max(|l|, |r|))` on scalars.
pub fn rel_residual(l: f64, r: f64) -> f64 {
    (l - r).abs() / (1.0 + l.abs().max(r.abs()))
}

struct Measure {
    part: &'static str,
    abs: f64,
    rel: f64,
}

impl Measure {
    fn scalar(part: &'static str, l: f64, r: f64) -> Self {
        Self {
            part,
            abs: (l - r).abs(),
            rel: rel_residual(l, r),
        }
    }

    /// A distance between two objects of the given sizes.
    fn dist(part: &'static str, d: f64, size_l: f64, size_r: f64) -> Self {
        Self {
            part,
            abs: d,
            rel: d / (1.0 + size_l.max(size_r)),
        }
    }
}

#[derive(Default)]
struct SampleOut {
    measures: Vec<Measure>,
    context: Value,
    /// (part, operator value, Laplace–Beltrami value) pairs.
    pairs: Vec<(&'static str, f64, f64)>,
}

#[derive(Clone, Copy)]
struct Ctx {
    n: usize,
    m: usize,
    params: MetricParams<f64>,
}

fn upper_pt(rng: &mut ChaCha8Rng, c: &Ctx) -> Point<f64> {
    Point::Upper(random_upper_point_with(rng, c.n, c.m))
}

fn disk_pt(rng: &mut ChaCha8Rng, c: &Ctx) -> Point<f64> {
    Point::Disk(random_disk_point_with(rng, c.n, c.m))
}

fn jac(rng: &mut ChaCha8Rng, c: &Ctx) -> JacobiElement<f64> {
    random_jacobi_with(rng, c.n, c.m)
}

fn star(rng: &mut ChaCha8Rng, c: &Ctx) -> JacobiStarElement<f64> {
    random_jacobi_star_with(rng, c.n, c.m)
}

fn heis_size(h: &HeisenbergElement<f64>) -> f64 {
    h.lambda.max_abs().max(h.mu.max_abs()).max(h.kappa.max_abs())
}

fn jac_size(g: &JacobiElement<f64>) -> f64 {
    [&g.sp.a, &g.sp.b, &g.sp.c, &g.sp.d]
        .iter()
        .fold(heis_size(&g.h), |acc, x| acc.max(x.max_abs()))
}

fn star_size(g: &JacobiStarElement<f64>) -> f64 {
    g.g.p.max_abs().max(g.g.q.max_abs()).max(g.xi.max_abs()).max(g.kappa.max_abs())
}

fn upper_size(p: &UpperPoint<f64>) -> f64 {
    p.omega.max_abs().max(p.z.max_abs())
}

fn disk_size(p: &DiskPoint<f64>) -> f64 {
    p.w.max_abs().max(p.eta.max_abs())
}

fn group_laws(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let mut out = SampleOut::default();
    let ms = &mut out.measures;

    let (a, b, d) = (random_heisenberg_with(rng, c.n, c.m), random_heisenberg_with(rng, c.n, c.m), random_heisenberg_with(rng, c.n, c.m));
    let e = HeisenbergElement::identity(c.n, c.m);
    let l = a.mul(&b)?.mul(&d)?;
    let r = a.mul(&b.mul(&d)?)?;
    ms.push(Measure::dist("heisenberg", l.dist(&r), heis_size(&l), heis_size(&r)));
    ms.push(Measure::dist("heisenberg", a.mul(&e)?.dist(&a), heis_size(&a), heis_size(&a)));
    ms.push(Measure::dist("heisenberg", e.mul(&a)?.dist(&a), heis_size(&a), heis_size(&a)));
    ms.push(Measure::dist("heisenberg", a.mul(&a.inverse())?.dist(&e), heis_size(&a), 1.0));
    ms.push(Measure::dist("heisenberg", a.inverse().mul(&a)?.dist(&e), heis_size(&a), 1.0));
    let ab = a.mul(&b)?;
    ms.push(Measure::dist("heisenberg-symmetry", ab.symmetry_defect(), heis_size(&ab), 0.0));

    let (a, b, d) = (jac(rng, c), jac(rng, c), jac(rng, c));
    let e = JacobiElement::identity(c.n, c.m);
    let l = a.mul(&b)?.mul(&d)?;
    let r = a.mul(&b.mul(&d)?)?;
    ms.push(Measure::dist("jacobi", l.dist(&r), jac_size(&l), jac_size(&r)));
    ms.push(Measure::dist("jacobi", a.mul(&e)?.dist(&a), jac_size(&a), jac_size(&a)));
    ms.push(Measure::dist("jacobi", e.mul(&a)?.dist(&a), jac_size(&a), jac_size(&a)));
    // a·a⁻¹ carries round-off of order |a|·|a⁻¹|.
    let cond = jac_size(&a) * jac_size(&a.inverse());
    ms.push(Measure::dist("jacobi", a.mul(&a.inverse())?.dist(&e), cond, 1.0));
    ms.push(Measure::dist("jacobi", a.inverse().mul(&a)?.dist(&e), cond, 1.0));
    ms.push(Measure::dist("heisenberg-symmetry", l.h.symmetry_defect(), jac_size(&l), 0.0));
    out.context = json!({ "jacobi": [a, b, d] });

    let (a, b, d) = (star(rng, c), star(rng, c), star(rng, c));
    let e = JacobiStarElement::identity(c.n, c.m);
    let l = a.mul(&b)?.mul(&d)?;
    let r = a.mul(&b.mul(&d)?)?;
    ms.push(Measure::dist("jacobi-star", l.dist(&r), star_size(&l), star_size(&r)));
    ms.push(Measure::dist("jacobi-star", a.mul(&e)?.dist(&a), star_size(&a), star_size(&a)));
    ms.push(Measure::dist("jacobi-star", e.mul(&a)?.dist(&a), star_size(&a), star_size(&a)));
    let ai = a.inverse()?;
    let cond = star_size(&a) * star_size(&ai);
    ms.push(Measure::dist("jacobi-star", a.mul(&ai)?.dist(&e), cond, 1.0));
    ms.push(Measure::dist("jacobi-star", ai.mul(&a)?.dist(&e), cond, 1.0));
    ms.push(Measure::dist("jacobi-star-symmetry", l.symmetry_defect(), star_size(&l), 0.0));
    Ok(out)
}

fn theta_hom(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let (a, b) = (jac(rng, c), jac(rng, c));
    let lhs = theta_map(&a.mul(&b)?);
    let rhs = theta_map(&a).mul(&theta_map(&b))?;
    let back = theta_inv(&theta_map(&a));
    Ok(SampleOut {
        measures: vec![
            Measure::dist("homomorphism", lhs.dist(&rhs), star_size(&lhs), star_size(&rhs)),
            Measure::dist("conjugation", theta_conjugation_residual(&a), jac_size(&a), 0.0),
            Measure::dist("inverse", back.dist(&a), jac_size(&a), jac_size(&back)),
        ],
        context: json!({ "g1": a, "g2": b }),
        pairs: vec![],
    })
}

fn action_axioms(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let mut ms = Vec::new();
    let (g1, g2) = (jac(rng, c), jac(rng, c));
    let p = upper_pt(rng, c);
    let pu = p.as_upper()?;
    let l = act_upper(&g1.mul(&g2)?, pu)?;
    let r = act_upper(&g1, &act_upper(&g2, pu)?)?;
    ms.push(Measure::dist("upper", l.dist(&r), upper_size(&l), upper_size(&r)));
    ms.push(Measure::dist("in-domain", if l.validate().is_ok() && r.validate().is_ok() { 0.0 } else { 1.0 }, 0.0, 0.0));
    let sl = act_siegel(&g1.sp.mul(&g2.sp)?, &pu.omega)?;
    let sr = act_siegel(&g1.sp, &act_siegel(&g2.sp, &pu.omega)?)?;
    ms.push(Measure::dist("siegel", sl.dist(&sr), sl.max_abs(), sr.max_abs()));

    let (h1, h2) = (star(rng, c), star(rng, c));
    let q = disk_pt(rng, c);
    let qd = q.as_disk()?;
    let l = act_disk(&h1.mul(&h2)?, qd)?;
    let r = act_disk(&h1, &act_disk(&h2, qd)?)?;
    ms.push(Measure::dist("disk", l.dist(&r), disk_size(&l), disk_size(&r)));
    ms.push(Measure::dist("in-domain", if l.validate().is_ok() && r.validate().is_ok() { 0.0 } else { 1.0 }, 0.0, 0.0));
    let dl = act_disk_n(&h1.g.mul(&h2.g)?, &qd.w)?;
    let dr = act_disk_n(&h1.g, &act_disk_n(&h2.g, &qd.w)?)?;
    ms.push(Measure::dist("disk-n", dl.dist(&dr), dl.max_abs(), dr.max_abs()));
    let hc = hc_pplus_component(&h1, qd)?;
    let direct = act_disk(&h1, qd)?;
    ms.push(Measure::dist("harish-chandra", hc.dist(&direct), disk_size(&hc), disk_size(&direct)));
    Ok(SampleOut {
        measures: ms,
        context: json!({ "g1": g1, "g2": g2, "point": p, "h1": h1, "h2": h2, "disk_point": q }),
        pairs: vec![],
    })
}

fn cayley_roundtrip(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let p = random_disk_point_with(rng, c.n, c.m);
    let back = cayley_inv(&cayley(&p)?)?;
    let g = jac(rng, c);
    let q = act_upper(&g, &random_upper_point_with(rng, c.n, c.m))?;
    let fwd = cayley(&cayley_inv(&q)?)?;
    Ok(SampleOut {
        measures: vec![
            Measure::dist("disk", back.dist(&p), disk_size(&back), disk_size(&p)),
            Measure::dist("upper", fwd.dist(&q), upper_size(&fwd), upper_size(&q)),
        ],
        context: json!({ "disk_point": Point::Disk(p), "upper_point": Point::Upper(q) }),
        pairs: vec![],
    })
}

fn cayley_compat(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let g = jac(rng, c);
    let p = random_disk_point_with(rng, c.n, c.m);
    let d = check_cayley_compat(&g, &p)?;
    let image = act_upper(&g, &cayley(&p)?)?;
    Ok(SampleOut {
        measures: vec![Measure::dist("compat", d, upper_size(&image), 0.0)],
        context: json!({ "element": g, "point": Point::Disk(p) }),
        pairs: vec![],
    })
}

fn metric_invariance(rng: &mut ChaCha8Rng, c: &Ctx, model: Model) -> Result<SampleOut> {
    let (g, p) = match model {
        Model::Upper => (GroupAction::Jacobi(jac(rng, c)), upper_pt(rng, c)),
        Model::Disk => (GroupAction::Star(star(rng, c)), disk_pt(rng, c)),
    };
    let t = random_tangent_with(rng, model, c.n, c.m);
    let gp = g.apply(&p)?;
    let gt = pushforward(&g, &p, &t, None)?;
    let ms = match model {
        Model::Upper => vec![
            Measure::scalar("upper", q_upper(gp.as_upper()?, &gt, c.params)?, q_upper(p.as_upper()?, &t, c.params)?),
            Measure::scalar("siegel", q_siegel(gp.parts().0, &gt)?, q_siegel(p.parts().0, &t)?),
        ],
        Model::Disk => vec![
            Measure::scalar("disk", q_disk(gp.as_disk()?, &gt, c.params)?, q_disk(p.as_disk()?, &t, c.params)?),
            Measure::scalar("disk-n", q_disk_n(gp.parts().0, &gt)?, q_disk_n(p.parts().0, &t)?),
        ],
    };
    Ok(SampleOut {
        measures: ms,
        context: json!({ "element": g, "point": p, "tangent": t }),
        pairs: vec![],
    })
}

fn cayley_map(q: &Point<f64>) -> Result<Point<f64>> {
    let u = cayley(q.as_disk()?)?;
    Point::from_parts(Model::Upper, u.omega, u.z)
}

fn cayley_isometry(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let p = disk_pt(rng, c);
    let t = random_tangent_with(rng, Model::Disk, c.n, c.m);
    let pd = p.as_disk()?;
    let up = cayley(pd)?;
    let fd = pushforward_map(&cayley_map, &p, &t, None)?;
    let exact = cayley_differential(pd, &t)?;
    let rhs = q_disk(pd, &t, c.params)?;
    Ok(SampleOut {
        measures: vec![
            Measure::scalar("fd-differential", q_upper(&up, &fd, c.params)?, rhs),
            Measure::scalar("analytic-differential", q_upper(&up, &exact, c.params)?, rhs),
        ],
        context: json!({ "point": p, "tangent": t }),
        pairs: vec![],
    })
}

fn tensor_pd(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let mut ms = Vec::new();
    let mut ctx = serde_json::Map::new();
    for (part, kind, p) in [
        ("upper", MetricKind::Upper(c.params), upper_pt(rng, c)),
        ("disk", MetricKind::Disk(c.params), disk_pt(rng, c)),
    ] {
        let g = metric_tensor(kind, &p)?;
        let eig = g.eigenvalues();
        let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eig.iter().cloned().fold(0.0, f64::max);
        let rel = if lo > 0.0 { g.symmetry_defect() / (1.0 + hi) } else { 1.0 + lo.abs() };
        ms.push(Measure { part, abs: rel, rel });
        ctx.insert(part.to_string(), json!({ "point": p, "min_eigenvalue": lo }));
    }
    Ok(SampleOut {
        measures: ms,
        context: Value::Object(ctx),
        pairs: vec![],
    })
}

fn nonconstant(model: Model, n: usize, m: usize, seed: u64) -> Vec<ScalarField> {
    test_field_suite(model, n, m, seed).into_iter().filter(|f| f.id != "const").collect()
}

fn lb_equivalence(rng: &mut ChaCha8Rng, c: &Ctx, which: &str) -> Result<SampleOut> {
    let (model, op, kind) = match which {
        "upper" => (Model::Upper, Operator::Upper(c.params, Reading::Symmetrized), MetricKind::Upper(c.params)),
        "disk" => (Model::Disk, Operator::Disk(c.params, Reading::Symmetrized), MetricKind::Disk(c.params)),
        "siegel" => (Model::Upper, Operator::Siegel, MetricKind::Siegel),
        _ => (Model::Disk, Operator::DiskN, MetricKind::DiskN),
    };
    let p = match model {
        Model::Upper => upper_pt(rng, c),
        Model::Disk => disk_pt(rng, c),
    };
    let field_seed: u64 = rng.gen();
    let mut out = SampleOut {
        context: json!({ "point": p, "field_seed": field_seed }),
        ..Default::default()
    };
    for f in nonconstant(model, c.n, c.m, field_seed) {
        let lhs = op.apply(&f, &p, None)?;
        let rhs = laplace_beltrami_of(kind, &f, &p, None)?;
        out.measures.push(Measure::scalar("fields", lhs, rhs));
        out.pairs.push(("fields", lhs, rhs));
    }
    Ok(out)
}

/// Compares `Op(f∘φ)(p)` with `(Op f)(φ(p))` for each listed operator.
fn invariance_measures(
    out: &mut SampleOut,
    g: &GroupAction,
    p: &Point<f64>,
    c: &Ctx,
    field_seed: u64,
    ops: &[(&'static str, Operator)],
) -> Result<()> {
    let gp = g.apply(p)?;
    // Operators built from matrix derivatives alone are invariant only on
    // fields of the matrix variable.
    let matrix_only = ops.iter().all(|(_, op)| matches!(op, Operator::Siegel | Operator::DiskN));
    for f in nonconstant(g.model(), c.n, c.m, field_seed) {
        let f = if matrix_only { f.matrix_only() } else { f };
        let composed = f.compose(format!("{}∘g", f.id), g.coord_map(c.n, c.m));
        let h_left = wirtinger_hessian(&composed, p, None)?;
        let h_right = wirtinger_hessian(&f, &gp, None)?;
        for (part, op) in ops {
            let l = op.contract(p, &h_left)?;
            let r = op.contract(&gp, &h_right)?;
            out.measures.push(Measure::scalar(part, l.re, r.re));
            out.measures.push(Measure::scalar("realness", l.im, 0.0));
        }
    }
    Ok(())
}

fn laplacian_invariance(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let g = GroupAction::Jacobi(jac(rng, c));
    let p = upper_pt(rng, c);
    let h = GroupAction::Star(star(rng, c));
    let q = disk_pt(rng, c);
    let field_seed: u64 = rng.gen();
    let mut out = SampleOut {
        context: json!({ "element": g, "point": p, "disk_element": h, "disk_point": q, "field_seed": field_seed }),
        ..Default::default()
    };
    invariance_measures(&mut out, &g, &p, c, field_seed, &[("upper", Operator::Upper(c.params, Reading::Symmetrized))])?;
    invariance_measures(&mut out, &g, &p, c, field_seed, &[("siegel", Operator::Siegel)])?;
    invariance_measures(&mut out, &h, &q, c, field_seed, &[("disk", Operator::Disk(c.params, Reading::Symmetrized))])?;
    invariance_measures(&mut out, &h, &q, c, field_seed, &[("disk-n", Operator::DiskN)])?;
    Ok(out)
}

fn remark41(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let g = GroupAction::Jacobi(jac(rng, c));
    let p = upper_pt(rng, c);
    let h = GroupAction::Star(star(rng, c));
    let q = disk_pt(rng, c);
    let field_seed: u64 = rng.gen();
    let mut out = SampleOut {
        context: json!({ "element": g, "point": p, "disk_element": h, "disk_point": q, "field_seed": field_seed }),
        ..Default::default()
    };
    let sym = Reading::Symmetrized;
    let inv = |k| Operator::Invariant(k, sym);
    invariance_measures(&mut out, &g, &p, c, field_seed, &[("D", inv(OpKind::D)), ("L", inv(OpKind::L))])?;
    invariance_measures(&mut out, &h, &q, c, field_seed, &[("Dtilde", inv(OpKind::Dtilde)), ("Ltilde", inv(OpKind::Ltilde))])?;

    // Splitting identities and the Cayley correspondence 4D ↔ D̃, 4L ↔ L̃.
    let unit = MetricParams::unit();
    let chart = Chart::new(c.n, c.m);
    let qd = q.as_disk()?.clone();
    let up = Point::Upper(cayley(&qd)?);
    for f in nonconstant(Model::Upper, c.n, c.m, field_seed) {
        let hu = wirtinger_hessian(&f, &up, None)?;
        let full = Operator::Upper(unit, sym).contract(&up, &hu)?.re;
        let d = inv(OpKind::D).contract(&up, &hu)?.re;
        let l = inv(OpKind::L).contract(&up, &hu)?.re;
        out.measures.push(Measure::scalar("split-upper", 0.25 * full, d + l));
        let pulled = f.pulled_to(Model::Disk, format!("{}∘Φ", f.id), move |x| {
            let (w, eta) = chart.decode(x);
            let u = cayley(&DiskPoint { w, eta })?;
            Ok(chart.encode(&u.omega, &u.z))
        });
        let hd = wirtinger_hessian(&pulled, &q, None)?;
        let dt = inv(OpKind::Dtilde).contract(&q, &hd)?.re;
        let lt = inv(OpKind::Ltilde).contract(&q, &hd)?.re;
        let full_t = Operator::Disk(unit, sym).contract(&q, &hd)?.re;
        out.measures.push(Measure::scalar("split-disk", full_t, dt + lt));
        out.measures.push(Measure::scalar("cayley-D", dt, 4.0 * d));
        out.measures.push(Measure::scalar("cayley-L", lt, 4.0 * l));
    }
    Ok(out)
}

fn reduce_n1m1(rng: &mut ChaCha8Rng, _c: &Ctx) -> Result<SampleOut> {
    let c = Ctx {
        n: 1,
        m: 1,
        params: MetricParams::unit(),
    };
    let p = disk_pt(rng, &c);
    let pd = p.as_disk()?;
    let t = random_tangent_with(rng, Model::Disk, 1, 1);
    let mut out = SampleOut {
        context: json!({ "point": p, "tangent": t }),
        ..Default::default()
    };
    out.measures.push(Measure::scalar("metric", q_disk(pd, &t, c.params)?, 4.0 * quarter_metric_11(pd, &t)?));
    let field_seed: u64 = rng.gen();
    for f in nonconstant(Model::Disk, 1, 1, field_seed) {
        let hess = wirtinger_hessian(&f, &p, None)?;
        let closed = laplacian_11(pd, &hess)?;
        for (part, reading) in [("laplacian-symmetrized", Reading::Symmetrized), ("laplacian-printed", Reading::Printed)] {
            let general = Operator::Disk(c.params, reading).contract(&p, &hess)?;
            let d = (general - closed).norm();
            out.measures.push(Measure::dist(part, d, general.norm(), closed.norm()));
        }
    }
    Ok(out)
}

fn pushforward_identities(rng: &mut ChaCha8Rng, c: &Ctx) -> Result<SampleOut> {
    let p = disk_pt(rng, c);
    let pd = p.as_disk()?;
    let t = random_tangent_with(rng, Model::Disk, c.n, c.m);
    let up = cayley(pd)?;
    let mut ms = Vec::new();

    let (y, v) = cayley_imaginary_parts(pd)?;
    ms.push(Measure::dist("Y", y.dist(&up.y()), y.max_abs(), up.y().max_abs()));
    ms.push(Measure::dist("V", v.dist(&up.v()), v.max_abs(), up.v().max_abs()));

    let fd = pushforward_map(&cayley_map, &p, &t, None)?;
    let exact = cayley_differential(pd, &t)?;
    ms.push(Measure::dist("dOmega", fd.dmat.dist(&exact.dmat), fd.dmat.max_abs(), exact.dmat.max_abs()));
    ms.push(Measure::dist("dZ", fd.dvec.dist(&exact.dvec), fd.dvec.max_abs(), exact.dvec.max_abs()));
    let fd2 = pushforward_map(&cayley_map, &p, &t.scale(2.0), None)?;
    ms.push(Measure::dist("linearity", fd2.dist(&fd.scale(2.0)), fd2.max_abs(), 2.0 * fd.max_abs()));
    let upt = Point::Upper(up.clone());
    ms.push(Measure::scalar("trace-identity", q_siegel(&up.omega, &fd)?, q_disk_n(&pd.w, &t)?));

    // First-order chain rule through Φ⁻¹, on every test field.
    let chart = Chart::new(c.n, c.m);
    let id = CMatrix::identity(c.n);
    let iw = &id - &pd.w;
    let half_over_i = Complex::new(0.0, -0.5);
    let field_seed: u64 = rng.gen();
    for f in nonconstant(Model::Disk, c.n, c.m, field_seed) {
        let on_upper = f.pulled_to(Model::Upper, format!("{}∘Φ⁻¹", f.id), move |x| {
            let (omega, z) = chart.decode(x);
            let d = cayley_inv(&UpperPoint { omega, z })?;
            Ok(chart.encode(&d.w, &d.eta))
        });
        let x_up = chart.point_coords(&upt);
        let direct = wirtinger_bundle_richardson(&on_upper, &upt, first_step(&x_up))?;
        let x_dk = chart.point_coords(&p);
        let disk = wirtinger_bundle_richardson(&f, &p, first_step(&x_dk))?;
        let inner = &(&iw * &disk.d_mat).transpose() - &(&disk.d_vec * &pd.eta);
        let d_omega = (&iw * &inner).scale(half_over_i).symmetric_part();
        let d_z = (&iw * &disk.d_vec).scale(half_over_i);
        ms.push(Measure::dist("chain-rule-mat", direct.d_mat.dist(&d_omega), direct.d_mat.max_abs(), d_omega.max_abs()));
        ms.push(Measure::dist("chain-rule-vec", direct.d_vec.dist(&d_z), direct.d_vec.max_abs(), d_z.max_abs()));
    }
    Ok(SampleOut {
        measures: ms,
        context: json!({ "point": p, "tangent": t }),
        pairs: vec![],
    })
}

type SampleFn = fn(&mut ChaCha8Rng, &Ctx) -> Result<SampleOut>;

fn sample_fn(name: &str) -> Result<SampleFn> {
    Ok(match name {
        "group-laws" => group_laws,
        "theta-hom" => theta_hom,
        "action-axioms" => action_axioms,
        "cayley-roundtrip" => cayley_roundtrip,
        "cayley-compat" => cayley_compat,
        "metric-invariance-upper" => |r, c| metric_invariance(r, c, Model::Upper),
        "metric-invariance-disk" => |r, c| metric_invariance(r, c, Model::Disk),
        "cayley-isometry" => cayley_isometry,
        "tensor-pd" => tensor_pd,
        "lb-equivalence-upper" => |r, c| lb_equivalence(r, c, "upper"),
        "lb-equivalence-disk" => |r, c| lb_equivalence(r, c, "disk"),
        "lb-equivalence-siegel" => |r, c| lb_equivalence(r, c, "siegel"),
        "lb-equivalence-diskn" => |r, c| lb_equivalence(r, c, "diskn"),
        "laplacian-invariance" => laplacian_invariance,
        "remark41-invariance" => remark41,
        "reduce-n1m1" => reduce_n1m1,
        "pushforward-identities" => pushforward_identities,
        other => return Err(Error::UnknownCheck(other.to_string())),
    })
}

struct SampleRecord {
    index: usize,
    retries: u32,
    result: Result<SampleOut>,
}

fn run_sample(f: SampleFn, ctx: &Ctx, seed: u64, index: usize) -> SampleRecord {
    let mut rng = sample_rng(seed, index as u64);
    let mut retries = 0;
    loop {
        match f(&mut rng, ctx) {
            Err(Error::DomainMargin { .. }) if retries < MAX_RETRIES => retries += 1,
            result => return SampleRecord { index, retries, result },
        }
    }
}

/// Least-squares constant `c` with `op ≈ c·lb`.
fn pairing_constant(pairs: &[(f64, f64)]) -> Option<f64> {
    let num: f64 = pairs.iter().map(|(o, l)| o * l).sum();
    let den: f64 = pairs.iter().map(|(_, l)| l * l).sum();
    (den > 0.0).then(|| num / den)
}

/// Runs a named check over `samples` seeded samples.
///
/// Sample `i` draws from its own stream of the master seed, so the report
/// does not depend on thread count or scheduling. Samples whose points fall
/// too close to the boundary are redrawn up to [`MAX_RETRIES`] times; other
/// errors fail the sample and the check.
pub fn run_check(name: &str, n: usize, m: usize, params: MetricParams<f64>, samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let f = sample_fn(name)?;
    if n == 0 || m == 0 || samples == 0 || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need n, m, samples ≥ 1 and tol > 0 (got n={n}, m={m}, samples={samples}, tol={tol})"
        )));
    }
    let (n, m) = if name == "reduce-n1m1" { (1, 1) } else { (n, m) };
    let params = if name == "reduce-n1m1" { MetricParams::unit() } else { params };
    let ctx = Ctx { n, m, params };
    let start = Instant::now();
    let records: Vec<SampleRecord> = (0..samples).into_par_iter().map(|i| run_sample(f, &ctx, seed, i)).collect();

    let mut parts: Vec<(&'static str, PartReport, Vec<(f64, f64)>)> = Vec::new();
    let mut worst = (f64::NEG_INFINITY, Value::Null);
    let mut retries = 0u64;
    let mut failed = 0u64;
    for rec in &records {
        retries += rec.retries as u64;
        let out = match &rec.result {
            Ok(out) => out,
            Err(e) => {
                failed += 1;
                if worst.0 < f64::INFINITY {
                    worst = (f64::INFINITY, json!({ "sample": rec.index, "error": e.to_string() }));
                }
                continue;
            }
        };
        for ms in &out.measures {
            let ratio = part_ratio(name, ms.part);
            let idx = match parts.iter().position(|(p, ..)| *p == ms.part) {
                Some(i) => i,
                None => {
                    parts.push((
                        ms.part,
                        PartReport {
                            name: ms.part.to_string(),
                            count: 0,
                            max_abs: 0.0,
                            max_rel: 0.0,
                            tol: tol * ratio,
                            pass: true,
                            constant: None,
                        },
                        Vec::new(),
                    ));
                    parts.len() - 1
                }
            };
            let part = &mut parts[idx].1;
            part.count += 1;
            let (abs, rel) = if ms.rel.is_finite() { (ms.abs, ms.rel) } else { (f64::INFINITY, f64::INFINITY) };
            part.max_abs = part.max_abs.max(abs);
            part.max_rel = part.max_rel.max(rel);
            let score = rel / part.tol;
            if score > worst.0 {
                worst = (
                    score,
                    json!({ "sample": rec.index, "part": ms.part, "abs": abs, "rel": rel, "input": out.context }),
                );
            }
        }
        for (part, op, lb) in &out.pairs {
            if let Some((.., v)) = parts.iter_mut().find(|(p, ..)| p == part) {
                v.push((*op, *lb));
            }
        }
    }
    let mut reports = Vec::with_capacity(parts.len());
    for (_, mut part, pairs) in parts {
        part.pass = part.max_rel <= part.tol;
        part.constant = pairing_constant(&pairs);
        reports.push(part);
    }
    let binding = reports
        .iter()
        .max_by(|a, b| (a.max_rel / a.tol).total_cmp(&(b.max_rel / b.tol)))
        .cloned();
    let (max_abs, max_rel, top_tol) = match (&binding, failed) {
        (Some(b), 0) => (Some(b.max_abs), Some(b.max_rel), b.tol),
        (Some(b), _) => (None, None, b.tol),
        (None, _) => (None, None, tol),
    };
    let finite = |v: Option<f64>| v.filter(|x| x.is_finite());
    let constant = if name.starts_with("lb-equivalence") {
        reports.first().and_then(|p| p.constant)
    } else {
        None
    };
    let pass = failed == 0 && !reports.is_empty() && reports.iter().all(|p| p.pass);
    Ok(CheckReport {
        check: name.to_string(),
        n,
        m,
        a: params.a,
        b: params.b,
        samples,
        seed,
        max_abs: finite(max_abs),
        max_rel: finite(max_rel),
        tol: top_tol,
        pass,
        constant,
        worst: worst.1,
        ms: start.elapsed().as_millis() as u64,
        retries,
        failed_samples: failed,
        parts: reports,
    })
}

/// Runs a check at its default tolerance.
pub fn run_default(name: &str, n: usize, m: usize, params: MetricParams<f64>, samples: usize, seed: u64) -> Result<CheckReport> {
    run_check(name, n, m, params, samples, seed, default_tol(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_has_a_tolerance_and_a_runner() {
        for name in CHECK_NAMES {
            assert!(default_tol(name).unwrap() > 0.0);
            assert!(sample_fn(name).is_ok());
        }
        assert!(matches!(run_default("nope", 1, 1, MetricParams::unit(), 1, 0), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn reference_runs_pass() {
        let unit = MetricParams::unit();
        assert!(run_check("cayley-roundtrip", 2, 1, unit, 100, 42, 1e-10).unwrap().pass);
        assert!(run_check("metric-invariance-disk", 1, 1, unit, 100, 7, 1e-5).unwrap().pass);
        assert!(run_check("group-laws", 3, 2, unit, 100, 1, 1e-10).unwrap().pass);
    }

    #[test]
    fn a_tiny_tolerance_fails_and_names_the_worst_sample() {
        let r = run_check("cayley-isometry", 1, 1, MetricParams::unit(), 5, 0, 1e-300).unwrap();
        assert!(!r.pass);
        assert!(r.max_rel.unwrap() > r.tol);
        assert!(r.worst.get("input").is_some());
    }

    #[test]
    fn cheap_checks_pass_and_are_reproducible() {
        let a = run_default("cayley-roundtrip", 2, 1, MetricParams::unit(), 20, 42).unwrap();
        assert!(a.pass, "{a:?}");
        let b = run_default("cayley-roundtrip", 2, 1, MetricParams::unit(), 20, 42).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }
}
