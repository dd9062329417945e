//! `sjgeo`: run the verification suites, sample points and group elements,
//! and evaluate metrics and Laplacians on points read from JSON.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on any usage,
//! input or domain error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sjgeo::geometry::{random_point, random_tangent_with, Model, Point, Tangent};
use sjgeo::groups::random::sample_rng;
use sjgeo::groups::{random_jacobi, random_jacobi_star};
use sjgeo::metrics::{metric_tensor, q_disk, q_disk_n, q_siegel, q_upper, MetricKind, MetricParams};
use sjgeo::operators::{field_by_id, OpKind, Operator, Reading};
use sjgeo::verify::{default_tol, fmt15, run_check, CheckReport, CHECK_NAMES};

#[derive(Parser, Debug)]
#[command(name = "sjgeo", version, about = "Jacobi group geometry on the Siegel-Jacobi space and disk")]
struct Cli {
    /// Size of the matrix variable.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Number of rows of the vector variable.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Metric weight of the matrix part.
    #[arg(long = "A", global = true, default_value_t = 1.0)]
    a: f64,
    /// Metric weight of the vector part.
    #[arg(long = "B", global = true, default_value_t = 1.0)]
    b: f64,
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Overrides the per-check default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for the verification suites.
    #[arg(long, global = true, env = "SJGEO_THREADS")]
    threads: Option<usize>,
    /// More log detail on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// No log lines on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one named check, or `all` of them.
    Verify { check: String },
    /// Evaluate a quantity at a point read from JSON.
    Eval {
        #[arg(value_enum)]
        target: Target,
        /// Point file (as written by `sample point`).
        #[arg(long)]
        point: PathBuf,
        /// Tangent file, for the metric targets.
        #[arg(long)]
        tangent: Option<PathBuf>,
        /// Test field id, for the operator targets.
        #[arg(long)]
        field: Option<String>,
        /// `symmetrized` or `printed` matrix-derivative terms.
        #[arg(long, default_value = "symmetrized")]
        reading: Reading,
    },
    /// Print a seeded random object as JSON.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[arg(long, value_enum, default_value_t = ModelArg::Disk)]
        model: ModelArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    /// Invariant metric `ds²_{A,B}` on the tangent.
    Metric,
    /// Metric of the matrix part alone on the tangent.
    MetricN,
    /// Metric tensor in chart coordinates.
    MetricTensor,
    /// Laplacian `Δ_{A,B}` of the field.
    Laplacian,
    /// Laplacian of the matrix part alone.
    LaplacianN,
    #[value(name = "D")]
    D,
    #[value(name = "L")]
    L,
    #[value(name = "Dtilde")]
    Dtilde,
    #[value(name = "Ltilde")]
    Ltilde,
    /// The field value itself.
    Field,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleKind {
    Point,
    Element,
    Tangent,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Upper,
    Disk,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Upper => Model::Upper,
            ModelArg::Disk => Model::Disk,
        }
    }
}

enum Failure {
    /// Usage, input or domain error.
    Config(String),
    /// A check ran and did not pass.
    Check,
}

impl From<sjgeo::Error> for Failure {
    fn from(e: sjgeo::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn tolerance_table() -> String {
    let mut s = String::from("Checks and default tolerances (relative residual):\n");
    for name in CHECK_NAMES {
        s.push_str(&format!("  {name:<26} {:e}\n", default_tol(name).unwrap_or(f64::NAN)));
    }
    s
}

struct Log {
    level: i8,
}

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if self.level >= 1 {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn debug(&self, msg: impl AsRef<str>) {
        if self.level >= 2 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn validate(cli: &Cli) -> Result<MetricParams<f64>, Failure> {
    if cli.n == 0 || cli.m == 0 {
        return Err(Failure::Config(format!("--n and --m must be at least 1 (got {} and {})", cli.n, cli.m)));
    }
    if cli.samples == 0 {
        return Err(Failure::Config("--samples must be at least 1".into()));
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(Failure::Config(format!("--tol must be positive (got {t})")));
        }
    }
    if cli.threads == Some(0) {
        return Err(Failure::Config("--threads must be at least 1".into()));
    }
    Ok(MetricParams::new(cli.a, cli.b)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn render_reports(reports: &[CheckReport], single: bool, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let v = if single { serde_json::to_value(&reports[0]) } else { serde_json::to_value(reports) };
            let v = v.map_err(|e| Failure::Config(e.to_string()))?;
            Ok(format!("{}\n", serde_json::to_string_pretty(&v).map_err(|e| Failure::Config(e.to_string()))?))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Failure::Config(e.to_string());
            w.write_record(CheckReport::CSV_HEADER).map_err(csv_err)?;
            for r in reports {
                w.write_record(r.csv_row()).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Config(e.to_string()))
        }
    }
}

fn cmd_verify(cli: &Cli, check: &str, log: &Log) -> Result<(), Failure> {
    let params = validate(cli)?;
    let names: Vec<&str> = if check == "all" {
        CHECK_NAMES.to_vec()
    } else if CHECK_NAMES.contains(&check) {
        vec![check]
    } else {
        let mut cmd = Cli::command();
        return Err(Failure::Config(format!(
            "unknown check '{check}'\n\n{}\n{}",
            tolerance_table(),
            cmd.render_usage()
        )));
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in &names {
        let tol = match cli.tol {
            Some(t) => t,
            None => default_tol(name)?,
        };
        log.debug(format!("running {name} at n={} m={} with {} samples", cli.n, cli.m, cli.samples));
        let r = run_check(name, cli.n, cli.m, params, cli.samples, cli.seed, tol)?;
        log.info(format!(
            "{:<26} {} max_rel={} tol={} ms={} retries={} failed={}",
            r.check,
            if r.pass { "pass" } else { "FAIL" },
            r.max_rel.map_or("null".into(), fmt15),
            fmt15(r.tol),
            r.ms,
            r.retries,
            r.failed_samples
        ));
        reports.push(r);
    }
    emit(&cli.out, &render_reports(&reports, check != "all", cli.format)?)?;
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{what} file {}: {e}", path.display())))
}

fn cmd_eval(
    cli: &Cli,
    target: Target,
    point: &Path,
    tangent: Option<&Path>,
    field: Option<&str>,
    reading: Reading,
) -> Result<(), Failure> {
    let params = validate(cli)?;
    let p: Point<f64> = read_json(point, "point")?;
    let (n, m) = p.dims();
    let model = p.model();
    let load_tangent = || -> Result<Tangent<f64>, Failure> {
        let path = tangent.ok_or_else(|| Failure::Config(format!("{target:?} needs --tangent")))?;
        let t: Tangent<f64> = read_json(path, "tangent")?;
        t.check_against(&p)?;
        Ok(t)
    };
    let load_field = || -> Result<_, Failure> {
        let id = field.ok_or_else(|| Failure::Config(format!("{target:?} needs --field")))?;
        Ok(field_by_id(id, model, n, m, cli.seed)?)
    };
    let value = match target {
        Target::Metric => {
            let t = load_tangent()?;
            match &p {
                Point::Upper(u) => q_upper(u, &t, params)?,
                Point::Disk(d) => q_disk(d, &t, params)?,
            }
        }
        Target::MetricN => {
            let t = load_tangent()?;
            match &p {
                Point::Upper(u) => q_siegel(&u.omega, &t)?,
                Point::Disk(d) => q_disk_n(&d.w, &t)?,
            }
        }
        Target::MetricTensor => {
            let kind = match model {
                Model::Upper => MetricKind::Upper(params),
                Model::Disk => MetricKind::Disk(params),
            };
            let g = metric_tensor(kind, &p)?;
            let rows: Vec<Vec<f64>> = (0..g.dim).map(|i| (0..g.dim).map(|j| g.g[(i, j)]).collect()).collect();
            let text = serde_json::to_string_pretty(&json!({ "dim": g.dim, "g": rows })).map_err(|e| Failure::Config(e.to_string()))?;
            return emit(&cli.out, &format!("{text}\n"));
        }
        Target::Field => {
            let f = load_field()?;
            f.eval(&f.chart().point_coords(&p))
        }
        op => {
            let f = load_field()?;
            let operator = match (op, model) {
                (Target::Laplacian, Model::Upper) => Operator::Upper(params, reading),
                (Target::Laplacian, Model::Disk) => Operator::Disk(params, reading),
                (Target::LaplacianN, Model::Upper) => Operator::Siegel,
                (Target::LaplacianN, Model::Disk) => Operator::DiskN,
                (Target::D, _) => Operator::Invariant(OpKind::D, reading),
                (Target::L, _) => Operator::Invariant(OpKind::L, reading),
                (Target::Dtilde, _) => Operator::Invariant(OpKind::Dtilde, reading),
                _ => Operator::Invariant(OpKind::Ltilde, reading),
            };
            operator.apply(&f, &p, None)?
        }
    };
    emit(&cli.out, &format!("{}\n", fmt15(value)))
}

fn cmd_sample(cli: &Cli, kind: SampleKind, model: Model) -> Result<(), Failure> {
    validate(cli)?;
    let (n, m, seed) = (cli.n, cli.m, cli.seed);
    let value = match (kind, model) {
        (SampleKind::Point, _) => serde_json::to_value(random_point::<f64>(model, n, m, seed)),
        (SampleKind::Element, Model::Upper) => serde_json::to_value(random_jacobi::<f64>(n, m, seed)),
        (SampleKind::Element, Model::Disk) => serde_json::to_value(random_jacobi_star::<f64>(n, m, seed)),
        (SampleKind::Tangent, _) => serde_json::to_value(random_tangent_with::<f64>(&mut sample_rng(seed, 0), model, n, m)),
    };
    let value = value.map_err(|e| Failure::Config(e.to_string()))?;
    let text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Config(e.to_string()))?;
    emit(&cli.out, &format!("{text}\n"))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let log = Log {
        level: if cli.quiet { 0 } else { 1 + cli.verbose as i8 },
    };
    if let Some(k) = cli.threads {
        if k > 0 {
            // Fails only if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    match &cli.cmd {
        Cmd::Verify { check } => cmd_verify(cli, check, &log),
        Cmd::Eval {
            target,
            point,
            tangent,
            field,
            reading,
        } => cmd_eval(cli, *target, point, tangent.as_deref(), field.as_deref(), *reading),
        Cmd::Sample { kind, model } => cmd_sample(cli, *kind, (*model).into()),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().after_long_help(tolerance_table()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
