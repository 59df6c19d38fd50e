//! `magsum`: magnetic Laplacian spectra, eigenvalue-sum inequality checks and
//! shape-functional scans on plane domains.

mod report;

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use magsum::eigensolve::{lowest_eigenvalues_with, MethodChoice, SolverOptions};
use magsum::geometry::{self, Domain};
use magsum::linalg2::{frame_identity_trials, Mat2};
use magsum::mesh::{refine, triangulate};
use magsum::operator::{assemble, BoundaryCondition, GaugeChoice, GaugeKind};
use magsum::verify::{
    corollary_scan, default_level, describe_domain, faber_krahn_check, invariance_suite_with, shear_family,
    stretch_family, theorem_checks, InvarianceOptions,
};

use report::{write_output, Report};

const FRAME_TOLERANCE: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(name = "magsum", version, about = "Magnetic Laplacian eigenvalue sums on plane domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest eigenvalues of the discretized magnetic Laplacian
    Spectrum(SpectrumArgs),
    /// Eigenvalue-sum inequality for one linear map
    Verify(VerifyArgs),
    /// Flux-normalized shape functional along a family of maps
    Scan(ScanArgs),
    /// Randomized checks of the rotation-averaging identities
    Frames(FramesArgs),
    /// Gauge, sign, rotation, reflection, translation, dilation and positivity checks
    Invariance(InvarianceArgs),
    /// Disk minimality of the scaled ground state
    FaberKrahn(FaberKrahnArgs),
    /// Mesh statistics or a JSON dump of the mesh
    Mesh(MeshArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    Triangle,
    Square,
    Hexagon,
    Disk,
}

impl Builtin {
    fn domain(self) -> Domain {
        match self {
            Builtin::Triangle => Domain::equilateral_triangle(),
            Builtin::Square => Domain::unit_square(),
            Builtin::Hexagon => Domain::regular_polygon(6, 1.0).expect("hexagon"),
            Builtin::Disk => Domain::disk(1.0).expect("disk"),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Builtin::Triangle => "triangle",
            Builtin::Square => "square",
            Builtin::Hexagon => "hexagon",
            Builtin::Disk => "disk",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
    Robin,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gauge {
    Symmetric,
    LandauY,
    LandauX,
}

impl From<Gauge> for GaugeKind {
    fn from(g: Gauge) -> Self {
        match g {
            Gauge::Symmetric => GaugeKind::Symmetric,
            Gauge::LandauY => GaugeKind::LandauY,
            Gauge::LandauX => GaugeKind::LandauX,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Stretch,
    Shear,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {v}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a non-negative number, got {v}"))
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got {v}"))
    }
}

fn matrix(s: &str) -> Result<Mat2, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c, d] if parts.iter().all(|v| v.is_finite()) => Ok(Mat2::new(a, b, c, d)),
        _ => Err("expected four comma-separated entries a11,a12,a21,a22".into()),
    }
}

#[derive(Args, Debug)]
#[group(id = "domain-source", multiple = false)]
struct DomainArgs {
    /// Built-in domain (default: triangle)
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Domain file (JSON)
    #[arg(long)]
    domain: Option<PathBuf>,
}

impl DomainArgs {
    fn load(&self) -> Result<(String, Domain), Failure> {
        if let Some(path) = &self.domain {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            return Ok((path.display().to_string(), geometry::parse_domain(&text)?));
        }
        let b = self.builtin.unwrap_or(Builtin::Triangle);
        Ok((b.name().to_string(), b.domain()))
    }
}

#[derive(Args, Debug)]
struct PhysicsArgs {
    /// Planck constant
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    hbar: f64,
    /// Boundary condition
    #[arg(long, value_enum, default_value_t = Bc::Dirichlet)]
    bc: Bc,
    /// Robin parameter (with --bc robin)
    #[arg(long, default_value_t = 1.0, value_parser = non_negative)]
    sigma: f64,
}

impl PhysicsArgs {
    fn bc(&self) -> BoundaryCondition {
        match self.bc {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
            Bc::Robin => BoundaryCondition::Robin(self.sigma),
        }
    }
}

#[derive(Args, Debug)]
#[group(id = "field", multiple = false)]
struct FieldArgs {
    /// Field strength
    #[arg(long, value_parser = finite)]
    beta: Option<f64>,
    /// Total flux; the field strength becomes flux / area
    #[arg(long, value_parser = finite)]
    flux: Option<f64>,
}

impl FieldArgs {
    fn beta(&self, d: &Domain, default: f64) -> f64 {
        match (self.beta, self.flux) {
            (Some(b), _) => b,
            (None, Some(f)) => f / geometry::area(d),
            (None, None) => default,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (default: standard output)
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value_t = Gauge::Symmetric)]
    gauge: Gauge,
    /// Number of eigenvalues
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=50))]
    n: u64,
    /// Refinement level (default depends on the domain)
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=8))]
    level: Option<u32>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Relative residual tolerance
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    tol: f64,
    /// Also write stiffness and mass matrices as triplet text into this directory
    #[arg(long)]
    dump_matrices: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
#[group(id = "map-source", multiple = false)]
struct MapArgs {
    /// Linear map a11,a12,a21,a22
    #[arg(long, value_parser = matrix, allow_hyphen_values = true)]
    map: Option<Mat2>,
    /// diag(t, 1/t)
    #[arg(long, value_parser = positive)]
    stretch: Option<f64>,
    /// [[1, s], [0, 1]]
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    shear: Option<f64>,
    /// Rotation angle in radians
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    rotate: Option<f64>,
}

impl MapArgs {
    fn map(&self) -> Mat2 {
        if let Some(m) = self.map {
            m
        } else if let Some(t) = self.stretch {
            stretch_family(t)
        } else if let Some(s) = self.shear {
            shear_family(s)
        } else if let Some(a) = self.rotate {
            Mat2::rotation(a)
        } else {
            Mat2::IDENTITY
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Field strength
    #[arg(long, default_value_t = 1.0, value_parser = finite, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=50))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=8))]
    level: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, value_enum, default_value_t = Family::Stretch)]
    family: Family,
    /// Explicit comma-separated parameter grid
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    step: f64,
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Total flux
    #[arg(long, default_value_t = TAU, value_parser = finite, allow_hyphen_values = true)]
    flux: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=50))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=8))]
    level: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct FramesArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Single group order (default: orders 3 to 12)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
    order: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[arg(long, default_value_t = 1.0, value_parser = finite, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=8))]
    level: Option<u32>,
    /// Replace every check tolerance
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct FaberKrahnArgs {
    /// Built-in domains to compare
    #[arg(long, value_enum, value_delimiter = ',', default_value = "triangle,square,hexagon,disk")]
    builtins: Vec<Builtin>,
    /// Additional domain files
    #[arg(long)]
    domain: Vec<PathBuf>,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    hbar: f64,
    #[arg(long, default_value_t = 0.0, value_parser = finite, allow_hyphen_values = true)]
    flux: f64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=8))]
    level: u32,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=8))]
    level: u32,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
}

impl From<magsum::Error> for Failure {
    fn from(e: magsum::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

/// Whether every check in the run passed.
type Outcome = Result<bool, Failure>;

fn emit(report: &Report, out: &OutputArgs) -> Result<(), Failure> {
    let date = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let text = match out.format {
        Format::Csv => report.to_csv(&date),
        Format::Json => report.to_json(&date),
    };
    write_output(out.output.as_deref(), &text).map_err(|e| Failure::Config(format!("cannot write output: {e}")))
}

fn bc_json(bc: &BoundaryCondition) -> serde_json::Value {
    json!({"bc": bc.name(), "sigma": bc.sigma()})
}

fn spectrum(args: &SpectrumArgs) -> Outcome {
    let (label, domain) = args.domain.load()?;
    let domain = domain.centered();
    let level = args.level.unwrap_or_else(|| default_level(&domain));
    let beta = args.field.beta(&domain, 0.0);
    let bc = args.physics.bc();
    let gauge = GaugeChoice::new(args.gauge.into(), beta);
    let mesh = refine(&triangulate(&domain)?, level);
    let op = assemble(&mesh, &gauge, args.physics.hbar, &bc)?;
    let opts = SolverOptions {
        method: match args.method {
            Method::Auto => MethodChoice::Auto,
            Method::Dense => MethodChoice::Dense,
            Method::Iterative => MethodChoice::Iterative,
        },
        tolerance: args.tol,
        ..SolverOptions::default()
    };
    if let Some(dir) = &args.dump_matrices {
        dump_matrices(dir, &op)?;
    }
    let res = lowest_eigenvalues_with(&op, args.n as usize, &opts)?;
    let config = json!({
        "domain": label,
        "shape": describe_domain(&domain),
        "area": geometry::area(&domain),
        "level": level,
        "vertices": mesh.vertices().len(),
        "dofs": op.dofs(),
        "gauge": args.gauge.to_possible_value().map(|v| v.get_name().to_string()),
        "hbar": args.physics.hbar,
        "beta": beta,
        "boundary": bc_json(&bc),
        "n": args.n,
        "method": res.config.method,
        "tolerance": args.tol,
    });
    let mut report = Report::new("spectrum", config, &["index", "eigenvalue", "residual"]);
    for (k, (l, r)) in res.eigenvalues.iter().zip(&res.residual_norms).enumerate() {
        report.row(vec![(k + 1).into(), (*l).into(), (*r).into()]);
    }
    report.summary("sum", res.eigenvalues.iter().sum::<f64>());
    emit(&report, &args.out)?;
    Ok(true)
}

fn dump_matrices(dir: &Path, op: &magsum::operator::MagneticOperator) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Config(format!("cannot write matrices: {e}"));
    fs::create_dir_all(dir).map_err(io)?;
    let mut buf = Vec::new();
    op.stiffness.write_triplets(&mut buf).map_err(io)?;
    write_output(Some(&dir.join("stiffness.txt")), &String::from_utf8_lossy(&buf)).map_err(io)?;
    buf.clear();
    op.mass.write_triplets(&mut buf).map_err(io)?;
    write_output(Some(&dir.join("mass.txt")), &String::from_utf8_lossy(&buf)).map_err(io)
}

fn verify(args: &VerifyArgs) -> Outcome {
    let (label, domain) = args.domain.load()?;
    let level = args.level.unwrap_or_else(|| default_level(&domain));
    let t = args.map.map();
    let bc = args.physics.bc();
    let verdicts = theorem_checks(&domain, &t, args.physics.hbar, args.beta, &bc, args.n as usize, level)?;
    let first = &verdicts[0];
    let config = json!({
        "domain": label,
        "map": t,
        "level": level,
        "hbar": args.physics.hbar,
        "beta": args.beta,
        "boundary": bc_json(&bc),
        "n": args.n,
        "singular_value_ratio": first.singular_value_ratio,
        "transformed": first.transformed,
    });
    let mut report = Report::new(
        "verify",
        config,
        &["n", "lhs", "rhs", "margin", "error_budget", "holds", "class"],
    );
    for v in &verdicts {
        report.row(vec![
            v.n.into(),
            v.lhs.into(),
            v.rhs.into(),
            v.margin.into(),
            v.error_budget.into(),
            v.holds.into(),
            v.class.name().into(),
        ]);
    }
    let holds = verdicts.iter().all(|v| v.holds);
    report.summary("holds", holds);
    emit(&report, &args.out)?;
    Ok(holds)
}

fn scan_grid(args: &ScanArgs, identity: f64) -> Result<Vec<f64>, Failure> {
    if let Some(g) = &args.grid {
        return Ok(g.clone());
    }
    if !(args.to >= args.from) {
        return Err(Failure::Config("--to must not be below --from".into()));
    }
    let count = ((args.to - args.from) / args.step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|k| {
            let v = args.from + k as f64 * args.step;
            if (v - identity).abs() < 1e-9 * args.step {
                identity
            } else {
                v
            }
        })
        .collect())
}

fn scan(args: &ScanArgs) -> Outcome {
    let (label, domain) = args.domain.load()?;
    let level = args.level.unwrap_or_else(|| default_level(&domain));
    let (family, identity): (fn(f64) -> Mat2, f64) = match args.family {
        Family::Stretch => (stretch_family, 1.0),
        Family::Shear => (shear_family, 0.0),
    };
    let grid = scan_grid(args, identity)?;
    let bc = args.physics.bc();
    let n = args.n as usize;
    let result = corollary_scan(&domain, &family, &grid, identity, args.physics.hbar, args.flux, &bc, n, level)?;
    let config = json!({
        "domain": label,
        "family": args.family.to_possible_value().map(|v| v.get_name().to_string()),
        "level": level,
        "hbar": args.physics.hbar,
        "flux": args.flux,
        "boundary": bc_json(&bc),
        "n": n,
    });
    let mut columns = vec!["parameter".to_string(), "A".into(), "I".into()];
    columns.extend((1..=n).map(|k| format!("lambda_{k}")));
    columns.extend(["functional".to_string(), "error_budget".into()]);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = Report::new("scan", config, &column_refs);
    for p in &result.points {
        let mut row = vec![p.parameter.into(), p.area.into(), p.inertia.into()];
        row.extend(p.eigenvalues.iter().map(|&l| l.into()));
        row.extend([p.functional.into(), p.error_budget.into()]);
        report.row(row);
    }
    report.summary("argmax", result.argmax_parameter);
    report.summary("monotone", result.monotone);
    emit(&report, &args.out)?;
    Ok(result.argmax_at_identity() && result.monotone)
}

fn frames(args: &FramesArgs) -> Outcome {
    let orders: Vec<usize> = match args.order {
        Some(n) => vec![n as usize],
        None => (3..=12).collect(),
    };
    if args.trials == 0 {
        return Err(Failure::Config("--trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let result = frame_identity_trials(&mut rng, args.trials, &orders);
    let config = json!({"trials": args.trials, "orders": orders, "seed": args.seed});
    let mut report = Report::new("frames", config, &["identity", "max_deviation", "passed"]);
    for (name, dev) in result.rows() {
        report.row(vec![name.into(), dev.into(), (dev <= FRAME_TOLERANCE).into()]);
    }
    let worst = result.max_deviation();
    report.summary("max_deviation", worst);
    report.summary("tolerance", FRAME_TOLERANCE);
    emit(&report, &args.out)?;
    Ok(worst <= FRAME_TOLERANCE)
}

fn invariance(args: &InvarianceArgs) -> Outcome {
    let (label, domain) = args.domain.load()?;
    let level = args.level.unwrap_or_else(|| default_level(&domain));
    let bc = args.physics.bc();
    let opts = InvarianceOptions {
        tolerance: args.tol,
        ..InvarianceOptions::default()
    };
    let result = invariance_suite_with(&domain, args.physics.hbar, args.beta, &bc, level, &opts)?;
    let config = json!({
        "domain": label,
        "level": level,
        "hbar": args.physics.hbar,
        "beta": args.beta,
        "boundary": bc_json(&bc),
        "tolerance_override": args.tol,
    });
    let mut report = Report::new("invariance", config, &["check", "value", "tolerance", "passed", "note"]);
    for c in &result.checks {
        report.row(vec![
            c.name.into(),
            c.value.into(),
            c.tolerance.into(),
            c.passed.into(),
            c.note.clone().into(),
        ]);
    }
    report.summary("all_passed", result.all_passed());
    emit(&report, &args.out)?;
    Ok(result.all_passed())
}

fn faber_krahn(args: &FaberKrahnArgs) -> Outcome {
    let mut domains: Vec<(String, Domain)> = args
        .builtins
        .iter()
        .map(|b| (b.name().to_string(), b.domain()))
        .collect();
    for path in &args.domain {
        let source = DomainArgs {
            builtin: None,
            domain: Some(path.clone()),
        };
        domains.push(source.load()?);
    }
    let result = faber_krahn_check(&domains, args.hbar, args.flux, args.level)?;
    let config = json!({"level": args.level, "hbar": args.hbar, "flux": args.flux});
    let mut report = Report::new(
        "faber-krahn",
        config,
        &[
            "domain",
            "area",
            "lambda_1",
            "lambda_1_area",
            "error_budget",
            "disk_lambda_1_area",
            "disk_error_budget",
            "disk_minimal",
            "above_bessel_bound",
        ],
    );
    for r in &result.rows {
        report.row(vec![
            r.label.clone().into(),
            r.area.into(),
            r.lambda1.into(),
            r.scaled.into(),
            r.error_budget.into(),
            r.disk_scaled.into(),
            r.disk_error_budget.into(),
            r.disk_minimal.into(),
            r.above_bessel_bound.map_or("n/a".to_string(), |b| b.to_string()).into(),
        ]);
    }
    report.summary("bessel_bound", result.bessel_bound);
    report.summary("passed", result.passed());
    emit(&report, &args.out)?;
    Ok(result.passed())
}

fn mesh(args: &MeshArgs) -> Outcome {
    let (label, domain) = args.domain.load()?;
    let mesh = refine(&triangulate(&domain.centered())?, args.level);
    match args.out.format {
        Format::Json => {
            let mut text = mesh.to_json();
            text.push('\n');
            write_output(args.out.output.as_deref(), &text)
                .map_err(|e| Failure::Config(format!("cannot write output: {e}")))?;
        }
        Format::Csv => {
            let config = json!({"domain": label, "level": args.level});
            let mut report = Report::new(
                "mesh",
                config,
                &["vertices", "triangles", "boundary_edges", "area", "min_angle"],
            );
            report.row(vec![
                mesh.vertices().len().into(),
                mesh.triangles().len().into(),
                mesh.boundary_edges().len().into(),
                mesh.total_area().into(),
                mesh.min_angle().into(),
            ]);
            emit(&report, &args.out)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Verify(a) => verify(a),
        Command::Scan(a) => scan(a),
        Command::Frames(a) => frames(a),
        Command::Invariance(a) => invariance(a),
        Command::FaberKrahn(a) => faber_krahn(a),
        Command::Mesh(a) => mesh(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
