//! `bie`: command line front end for the boundary integral solvers.
//!
//! Every command writes one JSON document (or a CSV table) to `--out` or
//! stdout. Failures also produce a JSON document with `"status": "error"`
//! and the error category, and exit with
//!
//! | code | category      |
//! |------|---------------|
//! | 0    | success       |
//! | 1    | numerical     |
//! | 2    | input         |
//! | 3    | compatibility |
//! | 4    | degeneracy    |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use bie_core::bvp;
use bie_core::conformal::riemann_map;
use bie_core::data::DataSource;
use bie_core::paramlab::{self, CounterexampleConfig, Observable};
use bie_core::spec::Spec;
use bie_core::{BoundaryOperators, Complex64, DerivativeMethod, Error, ErrorKind, ProblemKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "bie", version, about = "Laplace boundary integral solvers on smooth planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a Dirichlet or Neumann problem on a domain.
    Solve(SolveArgs),
    /// Riemann map of a simply connected domain and its invariants at a node.
    Map(MapArgs),
    /// Solve over a λ-grid of a domain family.
    Sweep(SweepArgs),
    /// Run the S''' counterexample experiment.
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Domain (or family, taken at λ = 0) spec in JSON.
    #[arg(long)]
    spec: PathBuf,
    /// Nodes per boundary component.
    #[arg(long = "N", default_value_t = 128, value_parser = parse_nodes)]
    n: usize,
    #[arg(long, value_parser = parse_problem)]
    problem: ProblemKind,
    /// Named generator (re_z2, cos_3, ...) or an expression in x, y, r, theta, t, nx, ny.
    #[arg(long)]
    data: String,
    /// File of probe points, `x y` per line or a JSON list of `[x, y]`.
    #[arg(long)]
    probes: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "N", default_value_t = 256, value_parser = parse_nodes)]
    n: usize,
    /// Point sent to 0, as `x,y`.
    #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
    base_point: Complex64,
    /// Boundary node where the invariants are evaluated.
    #[arg(long, default_value_t = 0)]
    node: usize,
    #[arg(long, value_enum, default_value_t = Derivatives::Local)]
    derivatives: Derivatives,
    /// Interior points where R is evaluated (same format as for solve).
    #[arg(long)]
    probes: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Derivatives {
    Local,
    Spectral,
}

impl From<Derivatives> for DerivativeMethod {
    fn from(d: Derivatives) -> Self {
        match d {
            Derivatives::Local => DerivativeMethod::Local,
            Derivatives::Spectral => DerivativeMethod::Spectral,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Family spec in JSON.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "N", default_value_t = 128, value_parser = parse_nodes)]
    n: usize,
    #[arg(long, value_parser = parse_problem)]
    problem: ProblemKind,
    /// As for solve; expressions may also use `lambda`.
    #[arg(long)]
    data: String,
    /// `a:b:n`, n equispaced values from a to b.
    #[arg(long)]
    lambda_grid: String,
    /// Reference-domain points tracked across the sweep.
    #[arg(long)]
    probes: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    /// Number of family terms.
    #[arg(long = "K", default_value_t = 2)]
    k: usize,
    /// λ step of the divided differences.
    #[arg(long, default_value_t = 5e-3)]
    h: f64,
    #[arg(long = "N", default_value_t = 256, value_parser = parse_nodes)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 32 || n % 2 != 0 {
        return Err(format!("N = {n} must be even and at least 32"));
    }
    Ok(n)
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    s.parse::<ProblemKind>().map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok(Complex64::new(
            x.parse().map_err(|e| format!("'{x}': {e}"))?,
            y.parse().map_err(|e| format!("'{y}': {e}"))?,
        )),
        _ => Err(format!("expected x,y, got '{s}'")),
    }
}

/// Reads probe points from a JSON list of pairs or from `x y` / `x,y` lines
/// (`#` starts a comment).
fn read_probes(path: &Path) -> Result<Vec<Complex64>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('[') {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        return Ok(pairs.into_iter().map(|[x, y]| Complex64::new(x, y)).collect());
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Spec(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if v.len() != 2 {
            return Err(Error::Spec(format!("{}:{}: expected two numbers", path.display(), i + 1)));
        }
        out.push(Complex64::new(v[0], v[1]));
    }
    Ok(out)
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Numerical => 1,
        ErrorKind::Input => 2,
        ErrorKind::Compatibility => 3,
        ErrorKind::Degeneracy => 4,
    }
}

/// What a command produced: a JSON document and its CSV rendering.
struct Report {
    json: Value,
    csv: String,
}

fn point_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn build_ops(spec: &Path, n: usize) -> Result<Arc<BoundaryOperators>, Error> {
    let domain = Spec::load(spec)?.domain()?;
    let counts = vec![n; domain.components.len()];
    Ok(Arc::new(BoundaryOperators::new(domain.discretize(&counts)?)))
}

fn cmd_solve(a: &SolveArgs) -> Result<Report, Error> {
    let ops = build_ops(&a.spec, a.n)?;
    let source = DataSource::parse(&a.data)?;
    let data = source.eval(&ops.mesh, 0.0)?;
    let sol = bvp::solve(&ops, a.problem, &data)?;
    let probes = match &a.probes {
        Some(p) => read_probes(p)?,
        None => Vec::new(),
    };
    let values = sol.eval(&probes)?;
    let trace = sol.trace()?;
    let mesh = &ops.mesh;
    let json = json!({
        "problem": a.problem.name(),
        "data": a.data,
        "nodes": mesh.node_counts(),
        "residual": sol.residual,
        "coefficients": sol.coefficients,
        "mu": sol.mu,
        "mu_condition": sol.mu_condition,
        "constant": sol.constant,
        "boundary": {
            "t": mesh.param,
            "x": mesh.points.iter().map(|z| z.re).collect::<Vec<_>>(),
            "y": mesh.points.iter().map(|z| z.im).collect::<Vec<_>>(),
            "data": sol.data,
            "trace": trace,
            "dlp_density": sol.dlp,
            "slp_density": sol.slp,
        },
        "probes": probes.iter().zip(&values).map(|(z, u)| json!({"x": z.re, "y": z.im, "u": u})).collect::<Vec<_>>(),
    });
    let csv = if probes.is_empty() {
        let dlp = sol.dlp.clone().unwrap_or_else(|| vec![0.0; mesh.len()]);
        let slp = sol.slp.clone().unwrap_or_else(|| vec![0.0; mesh.len()]);
        csv_table(
            &["t", "x", "y", "data", "trace", "dlp_density", "slp_density"],
            (0..mesh.len()).map(|j| vec![mesh.param[j], mesh.points[j].re, mesh.points[j].im, sol.data[j], trace[j], dlp[j], slp[j]]),
        )
    } else {
        csv_table(&["x", "y", "u"], probes.iter().zip(&values).map(|(z, u)| vec![z.re, z.im, *u]))
    };
    Ok(Report { json, csv })
}

fn cmd_map(a: &MapArgs) -> Result<Report, Error> {
    let ops = build_ops(&a.spec, a.n)?;
    let map = riemann_map(&ops, a.base_point)?.with_derivatives(a.derivatives.into());
    let invariants = map.invariants_at(a.node)?;
    let boundary = map.boundary_values();
    let probes = match &a.probes {
        Some(p) => read_probes(p)?,
        None => Vec::new(),
    };
    let at_probes = map.eval(&probes)?;
    let mesh = &ops.mesh;
    let json = json!({
        "nodes": mesh.node_counts(),
        "base_point": point_json(a.base_point),
        "phase": map.phase,
        "modulus_defect": map.modulus_defect(),
        "node": a.node,
        "node_point": point_json(mesh.points[a.node]),
        "derivatives": DerivativeMethod::from(a.derivatives),
        "invariants": invariants,
        "boundary": {
            "t": mesh.param,
            "x": mesh.points.iter().map(|z| z.re).collect::<Vec<_>>(),
            "y": mesh.points.iter().map(|z| z.im).collect::<Vec<_>>(),
            "re_r": boundary.iter().map(|w| w.re).collect::<Vec<_>>(),
            "im_r": boundary.iter().map(|w| w.im).collect::<Vec<_>>(),
        },
        "probes": probes.iter().zip(&at_probes).map(|(z, w)| json!({"x": z.re, "y": z.im, "re_r": w.re, "im_r": w.im})).collect::<Vec<_>>(),
    });
    let csv = csv_table(
        &["t", "x", "y", "re_r", "im_r"],
        (0..mesh.len()).map(|j| vec![mesh.param[j], mesh.points[j].re, mesh.points[j].im, boundary[j].re, boundary[j].im]),
    );
    Ok(Report { json, csv })
}

fn cmd_sweep(a: &SweepArgs) -> Result<Report, Error> {
    let family = Spec::load(&a.spec)?.family()?;
    let grid = paramlab::parse_lambda_grid(&a.lambda_grid)?;
    let source = DataSource::parse(&a.data)?;
    let mut observables: Vec<Observable> = match &a.probes {
        Some(p) => read_probes(p)?.into_iter().map(|z0| Observable::Point { z0 }).collect(),
        None => Vec::new(),
    };
    observables.push(Observable::TraceNorm);
    let data = |lambda: f64, mesh: &bie_core::Mesh| source.eval(mesh, lambda);
    let result = paramlab::sweep(&family, a.problem, a.n, &data, &grid, &observables)?;
    let csv = result.to_csv();
    let mut json = to_value(&result)?;
    json["observable_specs"] = to_value(&observables)?;
    json["data"] = json!(a.data);
    Ok(Report { json, csv })
}

fn cmd_counterexample(a: &CounterexampleArgs) -> Result<Report, Error> {
    let config = CounterexampleConfig { k: a.k, nodes: a.n, h: a.h, ..CounterexampleConfig::default() };
    let report = paramlab::counterexample_run(config)?;
    let csv = csv_table(
        &["lambda", "s2", "re_s3", "im_s3"],
        report.lambdas.iter().zip(&report.s2).zip(&report.s3).map(|((l, s2), s3)| vec![*l, *s2, s3.re, s3.im]),
    );
    let mut json = to_value(&report)?;
    json["pass"] = json!(report.passes.iter().all(|p| *p) && report.c1_agrees);
    Ok(Report { json, csv })
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::InvalidArgument(format!("serialization: {e}")))
}

fn error_json(command: &str, e: &Error) -> Value {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    match e {
        Error::Incompatible { functional, residual, relative } => {
            err["functional"] = json!(functional);
            err["residual"] = json!(residual);
            err["relative"] = json!(relative);
        }
        Error::FamilyDegeneracy { lambda, t, rho } => {
            err["lambda"] = json!(lambda);
            err["t"] = json!(t);
            err["rho"] = json!(rho);
        }
        Error::NearBoundary { x, y, distance, band } => {
            err["point"] = json!([x, y]);
            err["distance"] = json!(distance);
            err["band"] = json!(band);
        }
        _ => {}
    }
    json!({ "schema_version": SCHEMA_VERSION, "command": command, "status": "error", "error": err })
}

fn write_output(out: &Output, text: &str) -> std::io::Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("BIE_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (name, output, result) = match &cli.command {
        Command::Solve(a) => ("solve", &a.output, cmd_solve(a)),
        Command::Map(a) => ("map", &a.output, cmd_map(a)),
        Command::Sweep(a) => ("sweep", &a.output, cmd_sweep(a)),
        Command::Counterexample(a) => ("counterexample", &a.output, cmd_counterexample(a)),
    };
    let (text, code) = match result {
        Ok(report) => match output.format {
            Format::Csv => (report.csv, 0),
            Format::Json => {
                let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": name, "status": "ok" });
                if let (Value::Object(doc), Value::Object(body)) = (&mut doc, report.json) {
                    doc.extend(body);
                }
                (format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize")), 0)
            }
        },
        Err(e) => {
            eprintln!("bie {name}: {e}");
            let doc = error_json(name, &e);
            (format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize")), exit_code(e.kind()))
        }
    };
    if let Err(e) = write_output(output, &text) {
        eprintln!("bie {name}: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
