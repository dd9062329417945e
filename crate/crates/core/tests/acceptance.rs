//! Acceptance run: every criterion at its stated tolerance, one line each.
//! Runs without the libtest harness so the lines always print.

use sjgeo::geometry::{random_point, Model};
use sjgeo::metrics::{MetricKind, MetricParams};
use sjgeo::operators::{test_field_suite, Operator, Reading};
use sjgeo::verify::{default_tol, laplace_beltrami_of, rel_residual, run_check, CheckReport};

const SEED: u64 = 42;
const SMALL: [(usize, usize); 3] = [(1, 1), (2, 1), (2, 2)];
const ALL: [(usize, usize); 5] = [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)];

fn params() -> MetricParams<f64> {
    MetricParams::new(1.5, 0.7).unwrap()
}

fn run_at(name: &str, sizes: &[(usize, usize)], samples: usize, tol: f64) -> Vec<CheckReport> {
    sizes
        .iter()
        .map(|&(n, m)| run_check(name, n, m, params(), samples, SEED, tol).unwrap())
        .collect()
}

fn run(name: &str, sizes: &[(usize, usize)], samples: usize) -> Vec<CheckReport> {
    run_at(name, sizes, samples, default_tol(name).unwrap())
}

/// Worst `max_rel` of the listed parts over all reports, and whether every
/// listed part passed with no failed samples.
fn parts(reports: &[CheckReport], names: &[&str]) -> (f64, bool) {
    let mut worst = 0.0f64;
    let mut ok = true;
    for r in reports {
        ok &= r.failed_samples == 0;
        for name in names {
            let p = r.parts.iter().find(|p| p.name == *name);
            match p {
                Some(p) => {
                    worst = worst.max(p.max_rel);
                    ok &= p.pass;
                }
                None => ok = false,
            }
        }
    }
    (worst, ok)
}

fn whole(reports: &[CheckReport]) -> (f64, bool) {
    let worst = reports.iter().map(|r| r.max_rel.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    (worst, reports.iter().all(|r| r.pass))
}

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn line(id: u32, name: &'static str, (worst, pass): (f64, bool), tol: f64) -> Line {
    Line {
        id,
        name,
        pass,
        detail: format!("worst rel {worst:.3e} vs tol {tol:.0e}"),
    }
}

fn both(a: (f64, bool), b: (f64, bool)) -> (f64, bool) {
    (a.0.max(b.0), a.1 && b.1)
}

fn acceptance() -> bool {
    let mut lines = Vec::new();

    let groups = run("group-laws", &ALL, 100);
    lines.push(line(1, "group laws", whole(&groups), 1e-10));

    let theta = run("theta-hom", &ALL, 100);
    lines.push(line(2, "theta homomorphism and conjugation", whole(&theta), 1e-10));

    let actions = run("action-axioms", &ALL, 100);
    let axioms = parts(&actions, &["upper", "siegel", "disk", "disk-n", "in-domain"]);
    lines.push(line(3, "action axioms, in-domain outputs", axioms, 1e-9));

    let round = run("cayley-roundtrip", &SMALL, 100);
    let compat = run("cayley-compat", &SMALL, 100);
    let mut l = line(4, "partial Cayley roundtrip and compatibility", both(whole(&round), whole(&compat)), 1e-9);
    l.detail = format!(
        "roundtrip {:.3e} vs 1e-10, compat {:.3e} vs 1e-9",
        whole(&round).0,
        whole(&compat).0
    );
    lines.push(l);

    lines.push(line(5, "Harish-Chandra path", parts(&actions, &["harish-chandra"]), 1e-9));

    let inv_upper = run("metric-invariance-upper", &ALL, 100);
    lines.push(line(6, "upper metric invariance", parts(&inv_upper, &["upper"]), 1e-5));

    let inv_disk = run("metric-invariance-disk", &ALL, 100);
    let pd = run("tensor-pd", &ALL, 100);
    lines.push(line(7, "disk metric invariance and positivity", both(parts(&inv_disk, &["disk"]), whole(&pd)), 1e-5));

    let iso = run("cayley-isometry", &ALL, 100);
    lines.push(line(8, "Cayley isometry", whole(&iso), 1e-5));

    let mut lb = Vec::new();
    let mut constants = Vec::new();
    for name in ["lb-equivalence-upper", "lb-equivalence-disk", "lb-equivalence-siegel", "lb-equivalence-diskn"] {
        let reports = run(name, &SMALL, 10);
        for r in &reports {
            constants.push(format!("{}@{}x{}={:.9}", &name[15..], r.n, r.m, r.constant.unwrap_or(f64::NAN)));
        }
        lb.extend(reports);
    }
    let mut l = line(9, "Laplace-Beltrami equivalence", whole(&lb), 1e-3);
    l.detail = format!("{}; pairing constants {}", l.detail, constants.join(" "));
    lines.push(l);

    let lap = run("laplacian-invariance", &SMALL, 20);
    let rem = run("remark41-invariance", &SMALL, 20);
    lines.push(line(10, "operator invariance", both(whole(&lap), whole(&rem)), 1e-3));

    let reduce = run("reduce-n1m1", &[(1, 1)], 100);
    let mut l = line(11, "n = m = 1 reduction", whole(&reduce), 1e-6);
    let metric = parts(&reduce, &["metric"]);
    let lapl = parts(&reduce, &["laplacian-symmetrized", "laplacian-printed"]);
    l.detail = format!("metric {:.3e} vs 1e-12, Laplacian {:.3e} vs 1e-6", metric.0, lapl.0);
    lines.push(l);

    let push = run("pushforward-identities", &ALL, 100);
    let points = parts(&push, &["Y", "V"]);
    let diffs = parts(&push, &["dOmega", "dZ", "linearity", "trace-identity"]);
    let mut l = line(12, "pushforward identities", both(points, diffs), 1e-6);
    l.detail = format!("point identities {:.3e} vs 1e-10, differentials {:.3e} vs 1e-6", points.0, diffs.0);
    l.pass &= whole(&push).1;
    lines.push(l);

    for l in &lines {
        println!("criterion {:>2} {} {}: {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    lines.iter().all(|l| l.pass)
}

/// The unsymmetrized term-by-term operator agrees with Laplace–Beltrami
/// only when n = 1.
fn printed_reading_departs_for_n_above_one() -> bool {
    let unit = MetricParams::unit();
    let worst = |n: usize| {
        let mut worst = 0.0f64;
        for seed in 0..4 {
            let p = random_point::<f64>(Model::Disk, n, 1, seed);
            for f in test_field_suite(Model::Disk, n, 1, seed).into_iter().skip(1) {
                let lb = laplace_beltrami_of(MetricKind::Disk(unit), &f, &p, None).unwrap();
                let printed = Operator::Disk(unit, Reading::Printed).apply(&f, &p, None).unwrap();
                worst = worst.max(rel_residual(printed, lb));
            }
        }
        worst
    };
    let (one, two) = (worst(1), worst(2));
    let ok = one < 1e-3 && two > 1e-2;
    println!(
        "diagnostic   {} printed reading vs Laplace-Beltrami: n=1 worst rel {one:.3e}, n=2 worst rel {two:.3e}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() {
    let criteria = acceptance();
    let diagnostic = printed_reading_departs_for_n_above_one();
    if !(criteria && diagnostic) {
        eprintln!("acceptance failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
