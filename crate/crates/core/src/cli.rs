//! Command-line front end: evaluate closed forms, run brute-force
//! integrations, sweep parameters into plot-ready tables, and run the
//! verification suite.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 domain-constraint
//! violation, 3 integration non-convergence, 4 verification failure.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::checks::{self, Profile};
use crate::closed_forms::{self, RegulatorExponent};
use crate::error::{Error, Result};
use crate::geometry::{BodyPair, Geometry};
use crate::integrate::{self, EnergyResult, Method, QuadratureConfig, UnitKind};
use crate::material::MaterialPair;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Overlap(_) => EXIT_DOMAIN,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::Numerical(_) => EXIT_NOT_CONVERGED,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "casimir-polder",
    version,
    about = "Retarded van der Waals (Casimir-Polder) energies and forces between dilute dielectric bodies",
    after_help = "Units: natural (hbar = c = 1), all lengths in one arbitrary unit L.\n\
                  Total energies carry 1/L, per-length energies 1/L^2, per-area energies 1/L^3."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the closed-form energy (and force where defined)
    Eval(SceneArgs),
    /// Brute-force integration of the pair kernel over the geometry
    Integrate(SceneArgs),
    /// Sweep one geometry parameter, emitting one row per step
    Sweep(SweepArgs),
    /// Run the verification suite against all closed forms
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct SceneArgs {
    /// TOML scene description; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,

    /// Geometry kind: parallel-cylinders | cylinder-plane | sphere-plane |
    /// coaxial | eccentric | self-cylinder | plates
    #[arg(long)]
    geometry: Option<String>,

    /// Inner/first radius
    #[arg(long)]
    a: Option<f64>,
    /// Outer/second radius
    #[arg(long)]
    b: Option<f64>,
    /// Axis offset of the inner cylinder (eccentric)
    #[arg(long)]
    offset: Option<f64>,
    /// Axis- or center-to-plane distance
    #[arg(long)]
    z: Option<f64>,
    /// Plate gap (plates geometry)
    #[arg(long)]
    d: Option<f64>,
    /// Axis separation of two external cylinders
    #[arg(long)]
    r_axes: Option<f64>,

    /// Permittivity of body 1 (requires --eps2)
    #[arg(long, requires = "eps2", conflicts_with = "n")]
    eps1: Option<f64>,
    /// Permittivity of body 2 (requires --eps1)
    #[arg(long, requires = "eps1")]
    eps2: Option<f64>,
    /// Coupling constant N directly (alternative to --eps1/--eps2)
    #[arg(long)]
    n: Option<f64>,

    /// Self-energy regulator exponent (self-cylinder geometry)
    #[arg(long)]
    beta: Option<f64>,

    /// closed-form | integrate | both
    #[arg(long)]
    compute: Option<ComputeArg>,

    /// Relative tolerance for integration
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Evaluation budget for integration
    #[arg(long)]
    max_evals: Option<usize>,
    /// Seed fixing every stochastic sampling choice
    #[arg(long)]
    seed: Option<u64>,
    /// adaptive-subdivision | quasi-random | monte-carlo
    #[arg(long)]
    method: Option<MethodArg>,

    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: human-readable for eval, csv for sweep)
    #[arg(long)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Geometry field to sweep (a, b, offset, z, d, r_axes)
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// linear | log
    #[arg(long)]
    spacing: Option<SpacingArg>,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    /// fast | thorough
    #[arg(long, default_value = "fast")]
    profile: ProfileArg,
    /// Emit a JSON report instead of the table
    #[arg(long)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum ComputeArg {
    ClosedForm,
    Integrate,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum MethodArg {
    #[value(alias = "adaptive")]
    AdaptiveSubdivision,
    QuasiRandom,
    MonteCarlo,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::AdaptiveSubdivision => Method::AdaptiveSubdivision,
            MethodArg::QuasiRandom => Method::QuasiRandom,
            MethodArg::MonteCarlo => Method::MonteCarlo,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum ProfileArg {
    Fast,
    Thorough,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum FormatArg {
    Csv,
    Json,
    Human,
}

// ---------------------------------------------------------------------------
// Scene configuration (the TOML schema)
// ---------------------------------------------------------------------------

/// A full scene: geometry, material, what to compute, and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub geometry: SceneGeometry,
    pub material: MaterialSpec,
    #[serde(default)]
    pub computation: Computation,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Regulator exponent for the self-cylinder geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

/// Geometry descriptor: the closed-form configurations plus the
/// parallel-plate gap (the b → ∞ limit, closed form only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SceneGeometry {
    Body(Geometry),
    Plates(Plates),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Plates {
    Plates { d: f64 },
}

impl SceneGeometry {
    pub fn kind(&self) -> &'static str {
        match self {
            SceneGeometry::Body(g) => g.kind(),
            SceneGeometry::Plates(_) => "plates",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SceneGeometry::Body(g) => g.validate(),
            SceneGeometry::Plates(Plates::Plates { d }) => {
                if d.is_finite() && *d > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("plate gap d must be positive (got {d})")))
                }
            }
        }
    }

    pub fn unit_kind(&self) -> UnitKind {
        match self {
            SceneGeometry::Body(g) => g.unit_kind(),
            SceneGeometry::Plates(_) => UnitKind::EnergyPerArea,
        }
    }

    fn describe(&self) -> String {
        match self {
            SceneGeometry::Body(Geometry::ParallelCylinders { a, b, r_axes }) => {
                format!("parallel-cylinders (a={a}, b={b}, r_axes={r_axes})")
            }
            SceneGeometry::Body(Geometry::CylinderPlane { a, z }) => {
                format!("cylinder-plane (a={a}, z={z})")
            }
            SceneGeometry::Body(Geometry::SpherePlane { a, z }) => {
                format!("sphere-plane (a={a}, z={z})")
            }
            SceneGeometry::Body(Geometry::Coaxial { a, b }) => format!("coaxial (a={a}, b={b})"),
            SceneGeometry::Body(Geometry::Eccentric { a, b, offset }) => {
                format!("eccentric (a={a}, b={b}, offset={offset})")
            }
            SceneGeometry::Body(Geometry::SelfCylinder { a }) => format!("self-cylinder (a={a})"),
            SceneGeometry::Plates(Plates::Plates { d }) => format!("plates (d={d})"),
        }
    }

    /// Replace the named dimension, for sweeps and flag overrides.
    pub fn with_param(&self, name: &str, value: f64) -> Result<SceneGeometry> {
        use Geometry::*;
        let unknown = |kind: &str, fields: &str| {
            Err(Error::Config(format!(
                "parameter '{name}' does not name a dimension of {kind} (expected one of: {fields})"
            )))
        };
        let g = match *self {
            SceneGeometry::Body(ParallelCylinders { a, b, r_axes }) => match name {
                "a" => SceneGeometry::Body(ParallelCylinders { a: value, b, r_axes }),
                "b" => SceneGeometry::Body(ParallelCylinders { a, b: value, r_axes }),
                "r_axes" | "r-axes" => SceneGeometry::Body(ParallelCylinders { a, b, r_axes: value }),
                _ => return unknown("parallel-cylinders", "a, b, r_axes"),
            },
            SceneGeometry::Body(CylinderPlane { a, z }) => match name {
                "a" => SceneGeometry::Body(CylinderPlane { a: value, z }),
                "z" => SceneGeometry::Body(CylinderPlane { a, z: value }),
                _ => return unknown("cylinder-plane", "a, z"),
            },
            SceneGeometry::Body(SpherePlane { a, z }) => match name {
                "a" => SceneGeometry::Body(SpherePlane { a: value, z }),
                "z" => SceneGeometry::Body(SpherePlane { a, z: value }),
                _ => return unknown("sphere-plane", "a, z"),
            },
            SceneGeometry::Body(Coaxial { a, b }) => match name {
                "a" => SceneGeometry::Body(Coaxial { a: value, b }),
                "b" => SceneGeometry::Body(Coaxial { a, b: value }),
                _ => return unknown("coaxial", "a, b"),
            },
            SceneGeometry::Body(Eccentric { a, b, offset }) => match name {
                "a" => SceneGeometry::Body(Eccentric { a: value, b, offset }),
                "b" => SceneGeometry::Body(Eccentric { a, b: value, offset }),
                "offset" => SceneGeometry::Body(Eccentric { a, b, offset: value }),
                _ => return unknown("eccentric", "a, b, offset"),
            },
            SceneGeometry::Body(SelfCylinder { .. }) => match name {
                "a" => SceneGeometry::Body(SelfCylinder { a: value }),
                _ => return unknown("self-cylinder", "a"),
            },
            SceneGeometry::Plates(Plates::Plates { .. }) => match name {
                "d" => SceneGeometry::Plates(Plates::Plates { d: value }),
                _ => return unknown("plates", "d"),
            },
        };
        Ok(g)
    }
}

/// Material given either as two permittivities or as the coupling directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Permittivities { eps1: f64, eps2: f64 },
    Coupling { n: f64 },
}

impl MaterialSpec {
    pub fn material_pair(&self) -> Result<MaterialPair> {
        match *self {
            MaterialSpec::Permittivities { eps1, eps2 } => {
                MaterialPair::from_permittivities(eps1, eps2)
            }
            MaterialSpec::Coupling { n } => MaterialPair::from_coupling(n),
        }
    }

    pub fn coupling(&self) -> Result<f64> {
        Ok(self.material_pair()?.coupling())
    }

    fn describe(&self) -> String {
        match *self {
            MaterialSpec::Permittivities { eps1, eps2 } => {
                format!("eps1={eps1}, eps2={eps2} (N={:.6e})", self.coupling().unwrap_or(f64::NAN))
            }
            MaterialSpec::Coupling { n } => format!("N={n:.6e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Computation {
    #[default]
    ClosedForm,
    Integrate,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl SweepSpec {
    /// The swept values, in emission order.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.steps == 0 {
            return Err(Error::Config("sweep needs at least one step".into()));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config("sweep bounds must be finite".into()));
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Config("log spacing needs positive sweep bounds".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.start]);
        }
        let n = self.steps;
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            let f = i as f64 / (n - 1) as f64;
            let v = match self.spacing {
                Spacing::Linear => self.start + f * (self.stop - self.start),
                Spacing::Log => self.start * (self.stop / self.start).powf(f),
            };
            vals.push(v);
        }
        Ok(vals)
    }
}

// ---------------------------------------------------------------------------
// Row computation
// ---------------------------------------------------------------------------

/// One computed table row. Column presence is a pure function of the
/// geometry kind and computation mode; `status` distinguishes domain
/// failures inside sweeps.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<f64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrated: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub force: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
}

impl ResultRow {
    fn empty(status: String) -> Self {
        ResultRow {
            sweep_value: None,
            status,
            closed_form: None,
            integrated: None,
            rel_deviation: None,
            force: None,
            error_estimate: None,
            evaluations: None,
        }
    }
}

fn closed_energy(scene: &SceneConfig, geometry: &SceneGeometry) -> Result<f64> {
    let n = scene.material.coupling()?;
    match geometry {
        SceneGeometry::Body(Geometry::SelfCylinder { a }) => match scene.beta {
            Some(beta) => closed_forms::self_energy_regulated(*a, n, RegulatorExponent::new(beta)?),
            None => closed_forms::self_energy_dilute_cylinder(*a, n),
        },
        SceneGeometry::Body(g) => closed_forms::energy(g, n),
        SceneGeometry::Plates(Plates::Plates { d }) => closed_forms::energy_plates_dilute(*d, n),
    }
}

fn closed_force(scene: &SceneConfig, geometry: &SceneGeometry) -> Result<Option<f64>> {
    let n = scene.material.coupling()?;
    match geometry {
        SceneGeometry::Body(g) => closed_forms::force(g, n),
        SceneGeometry::Plates(_) => Ok(None),
    }
}

fn integrated_energy(scene: &SceneConfig, geometry: &SceneGeometry) -> Result<EnergyResult> {
    let mat = scene.material.material_pair()?;
    let cfg = &scene.quadrature;
    match geometry {
        SceneGeometry::Body(Geometry::SelfCylinder { a }) => {
            let beta = scene.beta.ok_or_else(|| {
                Error::Config(
                    "self-cylinder integration needs --beta < 1 (the regulated double integral)"
                        .into(),
                )
            })?;
            integrate::self_energy_integral_regulated(*a, mat.coupling(), beta, cfg)
        }
        SceneGeometry::Body(g) => match g.integration_bodies() {
            Some(BodyPair::CrossSections(r1, r2)) => integrate::energy_pair_2d(&r1, &r2, &mat, cfg),
            Some(BodyPair::Volumes(b1, b2)) => integrate::energy_pair_3d(&b1, &b2, &mat, cfg),
            None => unreachable!("self-cylinder handled above"),
        },
        SceneGeometry::Plates(_) => Err(Error::Config(
            "plates has no direct integration route; it is the large-radius limit of coaxial"
                .into(),
        )),
    }
}

/// Compute one row. Returns the row plus the worst exit code encountered.
fn compute_row(
    scene: &SceneConfig,
    geometry: &SceneGeometry,
    sweep_value: Option<f64>,
) -> (ResultRow, i32) {
    let mut row = ResultRow::empty("ok".into());
    row.sweep_value = sweep_value;

    if let Err(e) = geometry.validate() {
        row.status = format!("domain-error: {e}");
        return (row, EXIT_DOMAIN);
    }

    let mut code = EXIT_OK;
    let wants_closed =
        matches!(scene.computation, Computation::ClosedForm | Computation::Both);
    let wants_integral = matches!(scene.computation, Computation::Integrate | Computation::Both);

    if wants_closed {
        match closed_energy(scene, geometry) {
            Ok(e) => row.closed_form = Some(e),
            Err(e) => {
                row.status = format!("domain-error: {e}");
                return (row, exit_code_for(&e));
            }
        }
        match closed_force(scene, geometry) {
            Ok(f) => row.force = f,
            Err(e) => {
                row.status = format!("domain-error: {e}");
                return (row, exit_code_for(&e));
            }
        }
    }

    if wants_integral {
        match integrated_energy(scene, geometry) {
            Ok(r) => {
                row.integrated = Some(r.value);
                row.error_estimate = Some(r.error_estimate);
                row.evaluations = Some(r.evaluations);
            }
            Err(Error::NotConverged { result, .. }) => {
                // Keep the best estimate, mark the row, and flag exit 3.
                row.integrated = Some(result.value);
                row.error_estimate = Some(result.error_estimate);
                row.evaluations = Some(result.evaluations);
                row.status = "not-converged".into();
                code = EXIT_NOT_CONVERGED;
            }
            Err(e) => {
                row.status = format!("domain-error: {e}");
                return (row, exit_code_for(&e));
            }
        }
    }

    if let (Some(c), Some(i)) = (row.closed_form, row.integrated) {
        if c != 0.0 {
            row.rel_deviation = Some(((i - c) / c).abs());
        }
    }

    (row, code)
}

// ---------------------------------------------------------------------------
// Output formatting
// ---------------------------------------------------------------------------

fn unit_suffix(kind: UnitKind) -> &'static str {
    match kind {
        UnitKind::Energy => "[1/L]",
        UnitKind::EnergyPerLength => "[1/L^2]",
        UnitKind::EnergyPerArea => "[1/L^3]",
    }
}

fn force_suffix(kind: UnitKind) -> &'static str {
    match kind {
        UnitKind::Energy => "[1/L^2]",
        UnitKind::EnergyPerLength => "[1/L^3]",
        UnitKind::EnergyPerArea => "[1/L^4]",
    }
}

/// Column names for a run: a pure function of geometry kind, computation
/// mode, and whether this is a sweep.
fn csv_header(scene: &SceneConfig, sweep_param: Option<&str>) -> Vec<String> {
    let unit = unit_suffix(scene.geometry.unit_kind());
    let has_force = matches!(scene.geometry, SceneGeometry::Body(Geometry::Eccentric { .. }))
        && !matches!(scene.computation, Computation::Integrate);
    let mut cols = Vec::new();
    if let Some(p) = sweep_param {
        cols.push(format!("{p}[L]"));
    }
    cols.push("status".into());
    match scene.computation {
        Computation::ClosedForm => cols.push(format!("energy{unit}")),
        Computation::Integrate => cols.push(format!("energy{unit}")),
        Computation::Both => {
            cols.push(format!("closed_form{unit}"));
            cols.push(format!("integrated{unit}"));
            cols.push("rel_deviation".into());
        }
    }
    if has_force {
        cols.push(format!("force{}", force_suffix(scene.geometry.unit_kind())));
    }
    if !matches!(scene.computation, Computation::ClosedForm) {
        cols.push(format!("error_estimate{unit}"));
        cols.push("evaluations".into());
    }
    cols
}

/// 17 significant digits: lossless round-trip for f64.
fn full(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_full(v: Option<f64>) -> String {
    v.map(full).unwrap_or_default()
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(scene: &SceneConfig, row: &ResultRow, is_sweep: bool) -> Vec<String> {
    let has_force = matches!(scene.geometry, SceneGeometry::Body(Geometry::Eccentric { .. }))
        && !matches!(scene.computation, Computation::Integrate);
    let mut cells = Vec::new();
    if is_sweep {
        cells.push(opt_full(row.sweep_value));
    }
    cells.push(row.status.clone());
    match scene.computation {
        Computation::ClosedForm => cells.push(opt_full(row.closed_form)),
        Computation::Integrate => cells.push(opt_full(row.integrated)),
        Computation::Both => {
            cells.push(opt_full(row.closed_form));
            cells.push(opt_full(row.integrated));
            cells.push(opt_full(row.rel_deviation));
        }
    }
    if has_force {
        cells.push(opt_full(row.force));
    }
    if !matches!(scene.computation, Computation::ClosedForm) {
        cells.push(opt_full(row.error_estimate));
        cells.push(row.evaluations.map(|e| e.to_string()).unwrap_or_default());
    }
    cells
}

fn write_csv(
    out: &mut dyn Write,
    scene: &SceneConfig,
    rows: &[ResultRow],
    sweep_param: Option<&str>,
) -> io::Result<()> {
    let header = csv_header(scene, sweep_param);
    writeln!(out, "{}", header.iter().map(|h| csv_quote(h)).collect::<Vec<_>>().join(","))?;
    for row in rows {
        let cells = csv_row(scene, row, sweep_param.is_some());
        writeln!(out, "{}", cells.iter().map(|c| csv_quote(c)).collect::<Vec<_>>().join(","))?;
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, rows: &[ResultRow]) -> io::Result<()> {
    let text = serde_json::to_string_pretty(rows).expect("rows serialize");
    writeln!(out, "{text}")
}

fn write_human(out: &mut dyn Write, scene: &SceneConfig, row: &ResultRow) -> io::Result<()> {
    let unit = scene.geometry.unit_kind();
    writeln!(out, "geometry:  {}", scene.geometry.describe())?;
    writeln!(out, "material:  {}", scene.material.describe())?;
    writeln!(out, "units:     hbar = c = 1, lengths in L")?;
    if let Some(e) = row.closed_form {
        writeln!(out, "closed-form {:<28} {:+.6e}", unit.label(), e)?;
    }
    if let Some(e) = row.integrated {
        let err = row.error_estimate.unwrap_or(f64::NAN);
        let evals = row.evaluations.unwrap_or(0);
        writeln!(
            out,
            "integrated  {:<28} {:+.6e} +- {:.2e} ({} evaluations)",
            unit.label(),
            e,
            err,
            evals
        )?;
    }
    if let Some(dev) = row.rel_deviation {
        writeln!(out, "relative deviation: {dev:.3e}")?;
    }
    if let Some(f) = row.force {
        writeln!(out, "force       {:<28} {:+.6e}", force_suffix(unit), f)?;
    }
    if row.status != "ok" {
        writeln!(out, "status:    {}", row.status)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scene assembly from config file + flags
// ---------------------------------------------------------------------------

fn geometry_from_flags(args: &SceneArgs) -> Result<SceneGeometry> {
    let kind = args.geometry.as_deref().ok_or_else(|| {
        Error::Config("no geometry: pass --config or --geometry <kind> with its dimensions".into())
    })?;
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Error::Config(format!("geometry '{kind}' needs --{flag}")))
    };
    let g = match kind {
        "parallel-cylinders" => SceneGeometry::Body(Geometry::ParallelCylinders {
            a: need(args.a, "a")?,
            b: need(args.b, "b")?,
            r_axes: need(args.r_axes, "r-axes")?,
        }),
        "cylinder-plane" => SceneGeometry::Body(Geometry::CylinderPlane {
            a: need(args.a, "a")?,
            z: need(args.z, "z")?,
        }),
        "sphere-plane" => SceneGeometry::Body(Geometry::SpherePlane {
            a: need(args.a, "a")?,
            z: need(args.z, "z")?,
        }),
        "coaxial" => SceneGeometry::Body(Geometry::Coaxial {
            a: need(args.a, "a")?,
            b: need(args.b, "b")?,
        }),
        "eccentric" => SceneGeometry::Body(Geometry::Eccentric {
            a: need(args.a, "a")?,
            b: need(args.b, "b")?,
            offset: args.offset.unwrap_or(0.0),
        }),
        "self-cylinder" => SceneGeometry::Body(Geometry::SelfCylinder { a: need(args.a, "a")? }),
        "plates" => SceneGeometry::Plates(Plates::Plates { d: need(args.d, "d")? }),
        other => {
            return Err(Error::Config(format!(
                "unknown geometry kind '{other}' (expected parallel-cylinders, cylinder-plane, \
                 sphere-plane, coaxial, eccentric, self-cylinder, or plates)"
            )))
        }
    };
    Ok(g)
}

fn patch_geometry(mut g: SceneGeometry, args: &SceneArgs) -> Result<SceneGeometry> {
    for (name, value) in [
        ("a", args.a),
        ("b", args.b),
        ("offset", args.offset),
        ("z", args.z),
        ("d", args.d),
        ("r_axes", args.r_axes),
    ] {
        if let Some(v) = value {
            g = g.with_param(name, v)?;
        }
    }
    Ok(g)
}

/// Parse a scene config file with a field-precise diagnostic on failure.
pub fn parse_scene(text: &str) -> Result<SceneConfig> {
    let scene: SceneConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("scene config: {e}")))?;
    scene.geometry.validate()?;
    scene.quadrature.validate()?;
    scene.material.material_pair()?;
    Ok(scene)
}

fn load_scene(args: &SceneArgs, default_compute: Computation) -> Result<SceneConfig> {
    let mut scene = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let mut s = parse_scene(&text)?;
            // A config file may carry its own geometry; explicit dimension
            // flags patch it, and an explicit --geometry replaces it.
            if args.geometry.is_some() {
                s.geometry = geometry_from_flags(args)?;
            } else {
                s.geometry = patch_geometry(s.geometry, args)?;
            }
            s
        }
        None => SceneConfig {
            geometry: geometry_from_flags(args)?,
            material: MaterialSpec::Coupling { n: 1.0 },
            computation: default_compute,
            quadrature: QuadratureConfig::default(),
            sweep: None,
            beta: None,
        },
    };

    match (args.eps1, args.eps2, args.n) {
        (Some(e1), Some(e2), None) => {
            scene.material = MaterialSpec::Permittivities { eps1: e1, eps2: e2 }
        }
        (None, None, Some(n)) => scene.material = MaterialSpec::Coupling { n },
        (None, None, None) => {
            if args.config.is_none() {
                return Err(Error::Config(
                    "no material: pass --eps1/--eps2 or --n (or a config file)".into(),
                ));
            }
        }
        _ => unreachable!("clap enforces eps1/eps2 pairing and the eps/n conflict"),
    }

    if let Some(c) = args.compute {
        scene.computation = match c {
            ComputeArg::ClosedForm => Computation::ClosedForm,
            ComputeArg::Integrate => Computation::Integrate,
            ComputeArg::Both => Computation::Both,
        };
    } else if args.config.is_none() {
        scene.computation = default_compute;
    }
    if let Some(v) = args.rel_tol {
        scene.quadrature.rel_tol = v;
    }
    if let Some(v) = args.max_evals {
        scene.quadrature.max_evaluations = v;
    }
    if let Some(v) = args.seed {
        scene.quadrature.seed = v;
    }
    if let Some(m) = args.method {
        scene.quadrature.method = m.into();
    }
    if let Some(b) = args.beta {
        scene.beta = Some(b);
    }
    scene.quadrature.validate()?;
    scene.geometry.validate()?;
    Ok(scene)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = fs::File::create(p)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_eval(args: &SceneArgs, default_compute: Computation) -> Result<i32> {
    let scene = load_scene(args, default_compute)?;
    let (row, code) = compute_row(&scene, &scene.geometry, None);
    if row.status.starts_with("domain-error") {
        return Err(Error::Domain(row.status.clone()));
    }
    let mut out = open_out(&args.out)?;
    let format = args.format.unwrap_or(FormatArg::Human);
    match format {
        FormatArg::Human => write_human(&mut out, &scene, &row),
        FormatArg::Csv => write_csv(&mut out, &scene, &[row.clone()], None),
        FormatArg::Json => write_json(&mut out, &[row.clone()]),
    }
    .map_err(|e| Error::Config(format!("write failed: {e}")))?;
    out.flush().ok();
    Ok(code)
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let mut scene = load_scene(&args.scene, Computation::ClosedForm)?;
    if let (Some(p), Some(start), Some(stop), Some(steps)) =
        (&args.param, args.start, args.stop, args.steps)
    {
        scene.sweep = Some(SweepSpec {
            parameter: p.clone(),
            start,
            stop,
            steps,
            spacing: match args.spacing {
                Some(SpacingArg::Log) => Spacing::Log,
                _ => Spacing::Linear,
            },
        });
    }
    let sweep = scene
        .sweep
        .clone()
        .ok_or_else(|| Error::Config("sweep needs --param/--start/--stop/--steps".into()))?;
    // Fail fast on an unknown parameter name rather than per row.
    scene.geometry.with_param(&sweep.parameter, sweep.start)?;

    let values = sweep.values()?;
    let mut rows = Vec::with_capacity(values.len());
    let mut code = EXIT_OK;
    for v in values {
        let (row, row_code) = match scene.geometry.with_param(&sweep.parameter, v) {
            Ok(g) => {
                let (mut row, c) = compute_row(&scene, &g, Some(v));
                row.sweep_value = Some(v);
                (row, c)
            }
            Err(e) => {
                let mut row = ResultRow::empty(format!("domain-error: {e}"));
                row.sweep_value = Some(v);
                (row, EXIT_DOMAIN)
            }
        };
        code = code.max(row_code);
        rows.push(row);
    }

    let mut out = open_out(&args.scene.out)?;
    match args.scene.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Json => write_json(&mut out, &rows),
        _ => write_csv(&mut out, &scene, &rows, Some(&sweep.parameter)),
    }
    .map_err(|e| Error::Config(format!("write failed: {e}")))?;
    out.flush().ok();
    Ok(code)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let profile = match args.profile {
        ProfileArg::Fast => Profile::Fast,
        ProfileArg::Thorough => Profile::Thorough,
    };
    let results = checks::run_all(profile);
    let mut out = open_out(&args.out)?;
    match args.format {
        Some(FormatArg::Json) => {
            let text = serde_json::to_string_pretty(&results).expect("checks serialize");
            writeln!(out, "{text}").map_err(|e| Error::Config(format!("write failed: {e}")))?;
        }
        _ => {
            let color = args.out.is_none()
                && io::stdout().is_terminal()
                && std::env::var_os("NO_COLOR").is_none();
            let (green, red, reset) = if color {
                ("\x1b[32m", "\x1b[31m", "\x1b[0m")
            } else {
                ("", "", "")
            };
            writeln!(out, "{:<26} {:<6} {:>12} {:>12} {:>8}  detail", "check", "status", "measured", "threshold", "time")
                .ok();
            for c in &results {
                let status = if c.passed {
                    format!("{green}PASS{reset}")
                } else {
                    format!("{red}FAIL{reset}")
                };
                writeln!(
                    out,
                    "{:<26} {:<6} {:>12.3e} {:>12.3e} {:>7.2}s  {}",
                    c.name, status, c.measured, c.threshold, c.seconds, c.detail
                )
                .ok();
            }
            let failed = results.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {} failed", results.len(), failed).ok();
        }
    }
    out.flush().ok();
    if results.iter().all(|c| c.passed) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args, Computation::ClosedForm),
        Command::Integrate(args) => cmd_eval(args, Computation::Integrate),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotConverged { result, .. } = &e {
                eprintln!(
                    "partial result: {:+.6e} +- {:.2e} ({} evaluations)",
                    result.value, result.error_estimate, result.evaluations
                );
            }
            exit_code_for(&e)
        }
    }
}
