use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sjgeo::geometry::Point;
use sjgeo::groups::{JacobiElement, JacobiStarElement};

fn sjgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sjgeo")).args(args).output().expect("binary runs")
}

fn sjgeo_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sjgeo"))
        .args(args)
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const ORIGIN: &str = r#"{"model":"disk","n":1,"m":1,
  "w":{"rows":1,"cols":1,"data":[[0.0,0.0]]},
  "eta":{"rows":1,"cols":1,"data":[[0.0,0.0]]}}"#;

#[test]
fn verify_all_runs_every_check() {
    let o = sjgeo(&["verify", "all", "--n", "1", "--m", "1", "--samples", "50", "--seed", "42", "-q"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 17);
    for r in reports {
        assert_eq!(r["pass"], Value::Bool(true), "{}", r["check"]);
        for key in ["check", "n", "m", "A", "B", "samples", "seed", "max_abs", "max_rel", "tol", "constant", "worst", "ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn single_check_exits_zero() {
    let o = sjgeo(&["verify", "cayley-roundtrip", "--n", "2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["check"], "cayley-roundtrip");
    assert_eq!(v["n"], 2);
    // Log lines go to stderr only.
    assert!(String::from_utf8_lossy(&o.stderr).contains("cayley-roundtrip"));
}

#[test]
fn unknown_check_is_a_usage_error() {
    let o = sjgeo(&["verify", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Usage"));
    assert!(err.contains("group-laws"));
    assert!(o.stdout.is_empty());
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let o = sjgeo(&["verify", "cayley-isometry", "--tol", "1e-300", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], Value::Bool(false));
}

#[test]
fn invalid_config_exits_two() {
    for args in [
        vec!["verify", "group-laws", "--n", "0"],
        vec!["verify", "group-laws", "--B", "-1"],
        vec!["verify", "group-laws", "--samples", "0"],
        vec!["verify", "group-laws", "--tol", "0"],
    ] {
        assert_eq!(sjgeo(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_str(&stdout(o)).unwrap();
        v["ms"] = Value::Null;
        v
    };
    let args = ["verify", "lb-equivalence-disk", "--n", "2", "--samples", "6", "-q"];
    let one = sjgeo_env(&args, "SJGEO_THREADS", "1");
    let four = sjgeo(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn csv_has_one_row_per_check_and_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = sjgeo(&["verify", "group-laws", "--format", "csv", "--out", out.to_str().unwrap(), "-q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap().len(), 16);
    let rows: Vec<_> = rdr.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "group-laws");
}

#[test]
fn metric_at_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", ORIGIN);
    let t = write(
        dir.path(),
        "t.json",
        r#"{"model":"disk","dmat":{"rows":1,"cols":1,"data":[[1.0,0.0]]},"dvec":{"rows":1,"cols":1,"data":[[0.0,0.0]]}}"#,
    );
    let o = sjgeo(&["eval", "metric", "--point", &p, "--tangent", &t]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 4.0).abs() < 1e-12);
}

#[test]
fn laplacian_of_abs_w_squared_at_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", ORIGIN);
    let o = sjgeo(&["eval", "laplacian", "--point", &p, "--field", "absW2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-6, "{v}");
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(sjgeo(&["eval", "field", "--point", &bad, "--field", "const"]).status.code(), Some(2));

    let outside = write(
        dir.path(),
        "out.json",
        r#"{"model":"disk","n":1,"m":1,"w":{"rows":1,"cols":1,"data":[[1.5,0.0]]},"eta":{"rows":1,"cols":1,"data":[[0.0,0.0]]}}"#,
    );
    let o = sjgeo(&["eval", "field", "--point", &outside, "--field", "const"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid point"));

    let p = write(dir.path(), "p.json", ORIGIN);
    assert_eq!(sjgeo(&["eval", "laplacian", "--point", &p, "--field", "nope"]).status.code(), Some(2));
    assert_eq!(sjgeo(&["eval", "D", "--point", &p, "--field", "gauss"]).status.code(), Some(2));
    assert_eq!(sjgeo(&["eval", "metric", "--point", &p]).status.code(), Some(2));
}

#[test]
fn sampling_is_deterministic_and_valid() {
    let args = ["sample", "point", "--model", "disk", "--n", "2", "--m", "2", "--seed", "9"];
    let a = sjgeo(&args);
    assert_eq!(a.stdout, sjgeo(&args).stdout);
    for seed in 0..20 {
        let s = seed.to_string();
        let o = sjgeo(&["sample", "point", "--n", "2", "--m", "2", "--seed", &s]);
        let p: Point<f64> = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(p.margin() >= 0.1, "margin {}", p.margin());
    }

    let up = sjgeo(&["sample", "element", "--model", "upper", "--n", "2", "--m", "1"]);
    let g: JacobiElement<f64> = serde_json::from_str(&stdout(&up)).unwrap();
    assert!(g.validate().is_ok());
    let dk = sjgeo(&["sample", "element", "--model", "disk", "--n", "2", "--m", "1"]);
    let h: JacobiStarElement<f64> = serde_json::from_str(&stdout(&dk)).unwrap();
    assert!(h.validate().is_ok());
}

#[test]
fn help_lists_the_tolerance_table() {
    let o = sjgeo(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pushforward-identities"));
    assert!(s.contains("1e-10"));
}
