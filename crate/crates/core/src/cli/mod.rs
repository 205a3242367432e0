//! The `rotsurf` command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numeric failure, 4 failed
//! verification.

mod config;
mod output;

use std::ffi::OsString;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::integrator::{launch_separatrix, IntegratorConfig, IntegratorError};
use crate::phase_field::PhasePoint;
use crate::profile::{
    cylinder_profile, extend_separatrix, lambda_profile, read_profile_csv, sphere_profile,
    verify_profile, write_profile_csv, ExtensionSpec, ProfileCurve, ProfileError, SPHERE_HALF_SPAN,
};
use crate::shooting::{
    find_lambda0, portrait, ClassifyConfig, Lambda0Estimate, LambdaClass, ShootingError,
};
use crate::surface::{export_csv, export_obj, revolve, SurfaceError};

pub use config::FileConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Verification(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m)
            | CliError::Numeric(m)
            | CliError::Verification(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<IntegratorError> for CliError {
    fn from(e: IntegratorError) -> Self {
        match e {
            IntegratorError::InvalidConfig(_) | IntegratorError::Domain { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ShootingError> for CliError {
    fn from(e: ShootingError) -> Self {
        match e {
            ShootingError::InvalidLambda { .. } | ShootingError::InvalidTolerance { .. } => {
                CliError::Input(e.to_string())
            }
            ShootingError::Integration(inner) => inner.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Shooting(inner) => inner.into(),
            ProfileError::Integration(inner) => inner.into(),
            ProfileError::Io(_) => CliError::Io(e.to_string()),
            ProfileError::NoSignChange { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::Sink(_) => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rotsurf",
    version,
    about = "Rotational surfaces whose second fundamental form has unit length"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// key = value file; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long = "rel-tol", global = true)]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol", global = true)]
    abs_tol: Option<f64>,
    #[arg(long = "boundary-eps", global = true)]
    boundary_eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Builtin {
    Sphere,
    Cylinder,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeshFormat {
    Obj,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a family of lambdas and write the phase portrait.
    Portrait {
        /// Comma list `1.2,2.5` or range `start:end:count`.
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long, default_value = "portrait.json")]
        out: PathBuf,
    },
    /// Locate the separatrix value lambda0 by bisection and by launch.
    FindLambda0 {
        #[arg(long)]
        tol: Option<f64>,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Profile curve through (pi, lambda) as CSV, with a JSON sidecar.
    Curve {
        #[arg(long, conflicts_with = "builtin")]
        lambda: Option<f64>,
        /// Closed-form profile instead of an integrated one.
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        /// Half-width of the sampled arc-length window.
        #[arg(long)]
        span: Option<f64>,
        /// Sample spacing.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value = "curve.csv")]
        out: PathBuf,
    },
    /// Revolve a profile about the x-axis.
    Mesh {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        lambda: Option<f64>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long = "n-angular")]
        n_angular: Option<usize>,
        /// Profile samples for the sphere and cylinder.
        #[arg(long = "n-profile")]
        n_profile: Option<usize>,
        #[arg(long)]
        span: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_enum, default_value = "obj")]
        format: MeshFormat,
        #[arg(long, default_value = "mesh.obj")]
        out: PathBuf,
    },
    /// Glue separatrix copies and z = 1 segments; report junction regularity.
    Extend {
        #[arg(long)]
        copies: Option<usize>,
        /// Comma list of segment lengths, one fewer than copies.
        #[arg(long, allow_hyphen_values = true)]
        segments: Option<String>,
        /// Finite-difference step for the junction report.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value = "extension.csv")]
        out: PathBuf,
    },
    /// Check |A| = 1 on a profile CSV; exit 4 when a residual is too large.
    Verify {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long)]
        h: Option<f64>,
        /// Largest accepted curvature residual.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `args` (program name first), run the command and return the exit
/// code. Messages go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rotsurf: {}", e.message());
            e.exit_code()
        }
    }
}

fn classify_config(file: &FileConfig, g: &GlobalArgs) -> Result<ClassifyConfig, CliError> {
    let d = IntegratorConfig::default();
    let base = ClassifyConfig::default();
    let integrator = IntegratorConfig {
        rel_tol: file.pick(g.rel_tol, "rel_tol", d.rel_tol)?,
        abs_tol: file.pick(g.abs_tol, "abs_tol", d.abs_tol)?,
        boundary_eps: file.pick(g.boundary_eps, "boundary_eps", d.boundary_eps)?,
        max_step: file.pick(None, "max_step", d.max_step)?,
        min_step: file.pick(None, "min_step", d.min_step)?,
        max_time: file.pick(None, "max_time", d.max_time)?,
        ..d
    };
    integrator.validate()?;
    let cfg = ClassifyConfig {
        integrator,
        tol_sphere: file.pick(None, "tol_sphere", base.tol_sphere)?,
        separatrix_band: file.pick(None, "separatrix_band", base.separatrix_band)?,
    };
    if !(cfg.tol_sphere >= 0.0 && cfg.separatrix_band >= 0.0) {
        return Err(CliError::Input(
            "tol_sphere and separatrix_band must be non-negative".into(),
        ));
    }
    Ok(cfg)
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("{name} must be positive, got {v}")))
    }
}

/// `a,b,c` or `start:end:count` (count points, both ends included).
pub fn parse_lambdas(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: String| CliError::Input(format!("invalid lambda spec `{spec}`: {why}"));
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err(bad("a range is start:end:count".into()));
        };
        let a: f64 = a.parse().map_err(|e| bad(format!("{e}")))?;
        let b: f64 = b.parse().map_err(|e| bad(format!("{e}")))?;
        let n: usize = n.parse().map_err(|e| bad(format!("{e}")))?;
        match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n)
                .map(|i| a + (b - a) * (i as f64 / (n - 1) as f64))
                .collect(),
        }
    } else {
        spec.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("`{v}`: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 1.0)) {
        return Err(bad(format!("every lambda must exceed 1, got {v}")));
    }
    Ok(values)
}

fn parse_lengths(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("invalid segment length `{v}`: {e}")))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = classify_config(&file, &cli.global)?;
    match cli.command {
        Command::Portrait { lambdas, out } => {
            let spec = match lambdas {
                Some(s) => s,
                None => file
                    .raw("lambdas")
                    .map(str::to_string)
                    .ok_or_else(|| CliError::Input("--lambdas is required".into()))?,
            };
            cmd_portrait(&parse_lambdas(&spec)?, &cfg, &out)
        }
        Command::FindLambda0 { tol, out } => {
            let tol = positive("tol", file.pick(tol, "tol", 1e-10)?)?;
            cmd_find_lambda0(tol, &cfg, out.as_deref())
        }
        Command::Curve {
            lambda: _,
            builtin: Some(builtin),
            span,
            dt,
            out,
        } => {
            let span = span.or(file.get("span")?);
            let dt = positive("dt", file.pick(dt, "dt", 1e-2)?)?;
            let profile = match builtin {
                Builtin::Sphere => sphere_profile((2.0 * SPHERE_HALF_SPAN / dt).ceil() as usize)?,
                Builtin::Cylinder => {
                    let length = positive("span", span.unwrap_or(4.0))?;
                    cylinder_profile(length, (length / dt).ceil() as usize + 1)?
                }
            };
            cmd_curve_builtin(&profile, &out)
        }
        Command::Curve {
            lambda,
            builtin: None,
            span,
            dt,
            out,
        } => {
            let lambda = lambda
                .or(file.get("lambda")?)
                .ok_or_else(|| CliError::Input("--lambda is required".into()))?;
            let span = span.or(file.get("span")?);
            let dt = positive("dt", file.pick(dt, "dt", 1e-2)?)?;
            cmd_curve(lambda, span, dt, &cfg, &out)
        }
        Command::Mesh {
            lambda,
            builtin,
            n_angular,
            n_profile,
            span,
            dt,
            format,
            out,
        } => {
            let n_angular = file.pick(n_angular, "n_angular", 64usize)?;
            let n_profile = file.pick(n_profile, "n_profile", 201usize)?;
            let span = span.or(file.get("span")?);
            let dt = positive("dt", file.pick(dt, "dt", 1e-2)?)?;
            let profile = match (builtin, lambda) {
                (Some(Builtin::Sphere), _) => sphere_profile(n_profile)?,
                (Some(Builtin::Cylinder), _) => {
                    cylinder_profile(positive("span", span.unwrap_or(4.0))?, n_profile)?
                }
                (None, Some(lambda)) => lambda_profile(lambda, span, dt, &cfg)?.0,
                (None, None) => return Err(CliError::Input("give --lambda or --builtin".into())),
            };
            cmd_mesh(&profile, n_angular, format, &out)
        }
        Command::Extend {
            copies,
            segments,
            h,
            dt,
            out,
        } => {
            let copies = file.pick(copies, "copies", 1usize)?;
            let segments = match segments {
                Some(s) => s,
                None => file.raw("segments").unwrap_or("").to_string(),
            };
            let mut spec = ExtensionSpec::new(copies, parse_lengths(&segments)?);
            spec.fd_step = positive("h", file.pick(h, "h", spec.fd_step)?)?;
            spec.sample_step = positive("dt", file.pick(dt, "dt", spec.sample_step)?)?;
            cmd_extend(&spec, &cfg, &out)
        }
        Command::Verify { input, h, tol, out } => {
            let h = positive("h", file.pick(h, "h", 1e-3)?)?;
            let tol = positive("tol", file.pick(tol, "tol", 1e-4)?)?;
            cmd_verify(&input, h, tol, out.as_deref())
        }
    }
}

fn point_json(p: PhasePoint) -> Value {
    json!({"theta": p.theta, "z": p.z})
}

fn class_json(class: &LambdaClass) -> Value {
    match *class {
        LambdaClass::Sphere { limit, half_span }
        | LambdaClass::IncompleteLow { limit, half_span }
        | LambdaClass::IncompleteHigh { limit, half_span } => {
            json!({"limit": point_json(limit), "half_span": half_span})
        }
        LambdaClass::Periodic {
            crossing_height,
            t0,
        } => json!({"crossing_height": crossing_height, "t0": t0}),
        LambdaClass::Separatrix { miss, bracket } => json!({
            "miss": miss,
            "bracket": bracket.map(|(a, b)| vec![a, b]),
        }),
    }
}

fn lambda0_json(e: &Lambda0Estimate) -> Value {
    json!({
        "value": e.value,
        "bracket": [e.bracket.0, e.bracket.1],
        "iterations": e.iterations,
    })
}

pub fn cmd_portrait(lambdas: &[f64], cfg: &ClassifyConfig, out: &Path) -> Result<(), CliError> {
    let report = portrait(lambdas, cfg)?;
    let mut failures = Vec::new();
    let mut entries = Vec::new();
    for (k, entry) in report.entries.iter().enumerate() {
        let csv_path = output::numbered(out, k);
        let mut csv = String::from("theta,z\n");
        for (theta, z) in &entry.polyline {
            csv.push_str(&format!("{theta:.16e},{z:.16e}\n"));
        }
        output::write_file(&csv_path, csv.as_bytes())?;
        let polyline: Vec<[f64; 2]> = entry.polyline.iter().map(|&(t, z)| [t, z]).collect();
        let csv_name = csv_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned());
        entries.push(match &entry.class {
            Ok(class) => json!({
                "lambda": entry.lambda,
                "class": class.name(),
                "witness": class_json(class),
                "csv": csv_name,
                "polyline": polyline,
            }),
            Err(e) => {
                failures.push(format!("lambda = {}: {e}", entry.lambda));
                json!({
                    "lambda": entry.lambda,
                    "class": Value::Null,
                    "error": e.to_string(),
                    "csv": csv_name,
                    "polyline": polyline,
                })
            }
        });
    }
    let doc = json!({
        "lambda0": lambda0_json(&report.lambda0),
        "entries": entries,
    });
    output::write_file(out, output::to_json(&doc).as_bytes())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(failures.join("; ")))
    }
}

pub fn cmd_find_lambda0(
    tol: f64,
    cfg: &ClassifyConfig,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let bisection = find_lambda0(cfg, tol)?;
    let launch = launch_separatrix(&cfg.integrator)?;
    let end = launch.last();
    let doc = json!({
        "tol": tol,
        "bisection": lambda0_json(&bisection),
        "launch": {"value": end.z, "theta": end.theta, "arc_length": end.t},
        "difference": (end.z - bisection.value).abs(),
    });
    emit(out, &output::to_json(&doc))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => output::write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn profile_csv(profile: &ProfileCurve) -> Vec<u8> {
    let mut buf = Vec::new();
    write_profile_csv(profile, &mut buf).expect("writing to memory cannot fail");
    buf
}

pub fn cmd_curve(
    lambda: f64,
    span: Option<f64>,
    dt: f64,
    cfg: &ClassifyConfig,
    out: &Path,
) -> Result<(), CliError> {
    let (profile, class) = lambda_profile(lambda, span, dt, cfg)?;
    output::write_file(out, &profile_csv(&profile))?;
    let (lo, hi) = profile.span();
    let terminal = class.boundary_limit().map(|(p, _)| point_json(p));
    let doc = json!({
        "lambda": lambda,
        "class": class.name(),
        "witness": class_json(&class),
        "span": [lo, hi],
        "finite": class.boundary_limit().is_some(),
        "terminal": terminal,
        "samples": profile.len(),
    });
    output::write_file(&output::sidecar(out), output::to_json(&doc).as_bytes())
}

fn cmd_curve_builtin(profile: &ProfileCurve, out: &Path) -> Result<(), CliError> {
    output::write_file(out, &profile_csv(profile))?;
    let (lo, hi) = profile.span();
    let doc = json!({
        "builtin": profile.kind().name(),
        "span": [lo, hi],
        "samples": profile.len(),
    });
    output::write_file(&output::sidecar(out), output::to_json(&doc).as_bytes())
}

fn cmd_mesh(
    profile: &ProfileCurve,
    n_angular: usize,
    format: MeshFormat,
    out: &Path,
) -> Result<(), CliError> {
    let mesh = revolve(profile, n_angular)?;
    let mut buf = Vec::new();
    match format {
        MeshFormat::Obj => export_obj(&mesh, &mut buf)?,
        MeshFormat::Csv => export_csv(&mesh, &mut buf)?,
    }
    output::write_file(out, &buf)
}

pub fn cmd_extend(spec: &ExtensionSpec, cfg: &ClassifyConfig, out: &Path) -> Result<(), CliError> {
    let (profile, report) = extend_separatrix(spec, cfg)?;
    output::write_file(out, &profile_csv(&profile))?;
    let junctions: Vec<Value> = report
        .junctions
        .iter()
        .map(|j| {
            json!({
                "t": j.t,
                "kind": format!("{:?}", j.kind),
                "order": j.order.name(),
                "jumps": j.jumps,
                "thresholds": j.thresholds,
                "theta3_jump": j.theta3_jump,
                "position_gap": j.position_gap,
            })
        })
        .collect();
    let doc = json!({
        "copies": spec.copies,
        "segment_lengths": spec.segment_lengths,
        "fd_step": report.fd_step,
        "kind": profile.kind().name(),
        "min_order": report.min_order().map(|o| o.name()),
        "junctions": junctions,
    });
    output::write_file(&output::sidecar(out), output::to_json(&doc).as_bytes())
}

pub fn cmd_verify(input: &Path, h: f64, tol: f64, out: Option<&Path>) -> Result<(), CliError> {
    let file = std::fs::File::open(input)
        .map_err(|e| CliError::Input(format!("cannot open {}: {e}", input.display())))?;
    let profile = read_profile_csv(BufReader::new(file))?;
    let report = verify_profile(&profile, h)?;
    let pass = report.passes(tol);
    let doc = json!({
        "input": input.display().to_string(),
        "h": report.h,
        "tol": tol,
        "samples": report.samples,
        "max_curvature_residual": report.max_curvature_residual,
        "worst_t": report.worst_t,
        "max_unit_speed_violation": report.max_unit_speed_violation,
        "monotonicity_violations": report.monotonicity_violations,
        "pass": pass,
    });
    emit(out, &output::to_json(&doc))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "FAIL: curvature residual {:e} (tol {tol:e}), unit-speed {:e}, {} monotonicity violations",
            report.max_curvature_residual,
            report.max_unit_speed_violation,
            report.monotonicity_violations
        )))
    }
}
