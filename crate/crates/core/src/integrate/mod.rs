//! Brute-force Casimir-Polder summation: adaptive multidimensional
//! integration of the `s⁻⁷` kernel over volume pairs and of the reduced
//! `s⁻⁶` kernel over cross-section pairs. Serves as the universal numerical
//! oracle for the closed forms.

pub mod cubature;
pub mod gk;
pub mod lds;
pub mod region;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::MaterialPair;
use cubature::{CubatureOpts, Eval};
use gk::QuadEstimate;
pub use region::{min_separation_2d, min_separation_3d, Region2D, Region3D, Separation};
use region::MapCtx;

/// Total parameter dimension at which adaptive subdivision hands over to
/// quasi-random sampling once its panel budget is exhausted.
const QMC_FALLBACK_DIM: usize = 6;

/// Integration strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Genz-Malik boxes split by largest fourth difference (default). For
    /// six or more dimensions, falls back to quasi-random sampling when the
    /// panel budget is exhausted before convergence.
    #[serde(alias = "adaptive")]
    AdaptiveSubdivision,
    /// Randomly shifted Sobol sequences; error from the shift spread.
    QuasiRandom,
    /// Seeded pseudo-random sampling; error from the sample variance.
    MonteCarlo,
}

/// Tolerances, budgets and the seed that fixes every stochastic choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
    pub method: Method,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-4,
            abs_tol: 0.0,
            max_evaluations: 5_000_000,
            method: Method::AdaptiveSubdivision,
            seed: 0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 || self.abs_tol > 0.0) {
            return Err(Error::Config(
                "at least one of rel_tol, abs_tol must be positive".into(),
            ));
        }
        if self.rel_tol < 0.0 || self.abs_tol < 0.0 {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        if self.max_evaluations < 1000 {
            return Err(Error::Config(format!(
                "max_evaluations must be at least 1000 (got {})",
                self.max_evaluations
            )));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Physical dimension of an integrated energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitKind {
    /// Total energy, dimension 1/L in natural units.
    Energy,
    /// Energy per unit length, dimension 1/L².
    EnergyPerLength,
    /// Energy per unit area, dimension 1/L³.
    EnergyPerArea,
}

impl UnitKind {
    pub fn label(&self) -> &'static str {
        match self {
            UnitKind::Energy => "energy [1/L]",
            UnitKind::EnergyPerLength => "energy per length [1/L^2]",
            UnitKind::EnergyPerArea => "energy per area [1/L^3]",
        }
    }
}

/// A numerically integrated energy with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub value: f64,
    pub unit_kind: UnitKind,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn finish(res: QuadEstimate, unit_kind: UnitKind, scale: f64, cfg: &QuadratureConfig) -> Result<EnergyResult> {
    let result = EnergyResult {
        value: scale * res.value,
        unit_kind,
        error_estimate: scale.abs() * res.error,
        evaluations: res.evaluations,
    };
    if res.converged {
        Ok(result)
    } else {
        let requested = cfg.abs_tol.max(cfg.rel_tol * result.value.abs());
        Err(Error::NotConverged { achieved: result.error_estimate, requested, result })
    }
}

/// Run one of the three estimators over the unit cube. For adaptive mode in
/// six or more dimensions, a quarter of the budget goes to subdivision; if
/// that does not converge the remaining budget goes to quasi-random
/// sampling, whose convergence is steadier in high dimension.
fn integrate_unit_cube<F: FnMut(&[f64]) -> Eval>(
    mut f: F,
    dim: usize,
    sep_ref: f64,
    cfg: &QuadratureConfig,
) -> QuadEstimate {
    match cfg.method {
        Method::AdaptiveSubdivision => {
            let budget = if dim >= QMC_FALLBACK_DIM {
                cfg.max_evaluations / 4
            } else {
                cfg.max_evaluations
            };
            let opts = CubatureOpts {
                rel_tol: cfg.rel_tol,
                abs_tol: cfg.abs_tol,
                max_evals: budget,
                sep_ref,
            };
            let head = cubature::adaptive(&mut f, dim, &opts);
            if head.converged || dim < QMC_FALLBACK_DIM {
                return head;
            }
            let remaining = cfg.max_evaluations.saturating_sub(head.evaluations);
            let tail =
                lds::quasi_random(&mut f, dim, cfg.rel_tol, cfg.abs_tol, remaining, cfg.seed);
            QuadEstimate { evaluations: head.evaluations + tail.evaluations, ..tail }
        }
        Method::QuasiRandom => {
            lds::quasi_random(&mut f, dim, cfg.rel_tol, cfg.abs_tol, cfg.max_evaluations, cfg.seed)
        }
        Method::MonteCarlo => {
            lds::monte_carlo(&mut f, dim, cfg.rel_tol, cfg.abs_tol, cfg.max_evaluations, cfg.seed)
        }
    }
}

/// Importance context for an infinite region, built from its partner's
/// bounding geometry and the exact closest approach. Lateral spread of the
/// kernel mass is about one separation-plus-partner-size; the depth
/// penetration is roughly half of that.
fn ctx_for_3d(region: &Region3D, partner: &Region3D, separation: f64) -> MapCtx {
    if region.is_bounded() {
        return MapCtx::none();
    }
    let (pc, pr) = partner.anchor();
    let near = (separation + pr).max(f64::MIN_POSITIVE.sqrt());
    MapCtx { focus: [pc[0], pc[1], 0.0], lateral: near, depth: 0.5 * near }
}

fn ctx_for_2d(region: &Region2D, partner: &Region2D, separation: f64) -> MapCtx {
    if region.is_bounded() {
        return MapCtx::none();
    }
    match *region {
        Region2D::HalfPlane { .. } => {
            let (pc, pr) = partner.anchor();
            let near = (separation + pr).max(f64::MIN_POSITIVE.sqrt());
            MapCtx { focus: [0.0, pc[1], 0.0], lateral: near, depth: 0.5 * near }
        }
        _ => MapCtx::none(),
    }
}

fn check_disjoint(sep: Separation, scale: f64, what: &str) -> Result<f64> {
    // The pair kernel diverges at contact; a separation below the floating
    // margin voids every tolerance guarantee.
    let margin = 1e-9 * scale;
    if sep.overlap || sep.distance <= margin {
        return Err(Error::Overlap(format!(
            "{what}: minimum separation {:.3e} is below the safety margin {margin:.3e}",
            sep.distance
        )));
    }
    Ok(sep.distance)
}

fn zero_result(unit_kind: UnitKind) -> EnergyResult {
    EnergyResult { value: 0.0, unit_kind, error_estimate: 0.0, evaluations: 0 }
}

/// Total interaction energy between two disjoint volumes: the 6-dimensional
/// integral of the `−23 χ₁χ₂ / ((4π)³ s⁷)` pair kernel.
pub fn energy_pair_3d(
    body1: &Region3D,
    body2: &Region3D,
    mat: &MaterialPair,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    cfg.validate()?;
    body1.validate()?;
    body2.validate()?;
    if !body1.is_bounded() && !body2.is_bounded() {
        return Err(Error::Domain(
            "pair energy diverges: both bodies have infinite volume (use per-area or per-length results)"
                .into(),
        ));
    }
    let (c1, r1) = body1.anchor();
    let (c2, r2) = body2.anchor();
    let dist = ((c1[0] - c2[0]).powi(2) + (c1[1] - c2[1]).powi(2) + (c1[2] - c2[2]).powi(2)).sqrt();
    let scale = r1.max(r2).max(dist).max(1.0e-30);
    let sep = min_separation_3d(body1, body2);
    let sep_ref = check_disjoint(sep, scale, "energy_pair_3d")?;

    if mat.chi_product() == 0.0 {
        return Ok(zero_result(UnitKind::Energy));
    }

    let ctx1 = ctx_for_3d(body1, body2, sep_ref);
    let ctx2 = ctx_for_3d(body2, body1, sep_ref);
    let prefactor = -23.0 * mat.chi_product() / (4.0 * PI).powi(3);

    let f = |u: &[f64]| {
        let (p1, j1) = body1.map_unit([u[0], u[1], u[2]], &ctx1);
        let (p2, j2) = body2.map_unit([u[3], u[4], u[5]], &ctx2);
        let s2 = (p1[0] - p2[0]).powi(2) + (p1[1] - p2[1]).powi(2) + (p1[2] - p2[2]).powi(2);
        if !s2.is_finite() {
            // Point pushed past the far tail of an infinite map; the
            // integrand has already decayed to zero there.
            return Eval { f: 0.0, sep: f64::INFINITY };
        }
        let s = s2.sqrt();
        Eval { f: j1 * j2 / (s2 * s2 * s2 * s), sep: s }
    };

    let res = integrate_unit_cube(f, 6, sep_ref, cfg);
    finish(res, UnitKind::Energy, prefactor, cfg)
}

/// Interaction energy per unit length between two disjoint cross-sections:
/// the 4-dimensional integral of the axially reduced `−32N/(3π) s⁻⁶` kernel.
pub fn energy_pair_2d(
    region1: &Region2D,
    region2: &Region2D,
    mat: &MaterialPair,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    cfg.validate()?;
    region1.validate()?;
    region2.validate()?;
    if !region1.is_bounded() && !region2.is_bounded() {
        return Err(Error::Domain(
            "pair energy per length diverges: both cross-sections are unbounded".into(),
        ));
    }
    let (c1, r1) = region1.anchor();
    let (c2, r2) = region2.anchor();
    let dist = ((c1[0] - c2[0]).powi(2) + (c1[1] - c2[1]).powi(2)).sqrt();
    let scale = r1.max(r2).max(dist).max(1.0e-30);
    let sep = min_separation_2d(region1, region2);
    let sep_ref = check_disjoint(sep, scale, "energy_pair_2d")?;

    if mat.chi_product() == 0.0 {
        return Ok(zero_result(UnitKind::EnergyPerLength));
    }

    let ctx1 = ctx_for_2d(region1, region2, sep_ref);
    let ctx2 = ctx_for_2d(region2, region1, sep_ref);
    let prefactor = -32.0 * mat.coupling() / (3.0 * PI);

    let f = |u: &[f64]| {
        let (p1, j1) = region1.map_unit([u[0], u[1]], &ctx1);
        let (p2, j2) = region2.map_unit([u[2], u[3]], &ctx2);
        let s2 = (p1[0] - p2[0]).powi(2) + (p1[1] - p2[1]).powi(2);
        if !s2.is_finite() {
            return Eval { f: 0.0, sep: f64::INFINITY };
        }
        Eval { f: j1 * j2 / (s2 * s2 * s2), sep: s2.sqrt() }
    };

    let res = integrate_unit_cube(f, 4, sep_ref, cfg);
    finish(res, UnitKind::EnergyPerLength, prefactor, cfg)
}

/// Closed-form single-angle integral `∫₀^{2π} dθ (ρ² + ρ′² − 2ρρ′ cos θ)⁻³`,
/// used to reduce concentric 4D cross-section integrals to 2D.
///
/// Derived by twice differentiating `∫ dθ/(A − B cos θ) = 2π/√(A²−B²)` with
/// respect to `A`, giving `π(2A² + B²)/(A² − B²)^{5/2}` with `A = ρ² + ρ′²`,
/// `B = 2ρρ′`.
pub fn angular_kernel_reduction(rho: f64, rho_prime: f64) -> Result<f64> {
    if !(rho >= 0.0 && rho_prime >= 0.0) || !rho.is_finite() || !rho_prime.is_finite() {
        return Err(Error::Domain(format!(
            "angular_kernel_reduction: radii must be non-negative (got {rho}, {rho_prime})"
        )));
    }
    if rho == rho_prime {
        return Err(Error::Domain(
            "angular_kernel_reduction: integrand is singular at equal radii".into(),
        ));
    }
    let a = rho * rho + rho_prime * rho_prime;
    let b = 2.0 * rho * rho_prime;
    let diff = (rho * rho - rho_prime * rho_prime).abs();
    Ok(PI * (2.0 * a * a + b * b) / diff.powi(5))
}

/// Coaxial energy per length via the angularly reduced 2D integral
/// `−(32πN/3) ∫₀^{a²} dx ∫_{b²}^∞ dy (x² + y² + 4xy)/(y−x)⁵`.
///
/// The y-tail is mapped by `y = x + (b²−x)/v`, which turns the integrand
/// into a polynomial in `v`, so the quadrature sees a smooth bounded
/// integrand with no truncation error.
pub fn coaxial_reduced(a: f64, b: f64, n: f64, cfg: &QuadratureConfig) -> Result<EnergyResult> {
    cfg.validate()?;
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "coaxial geometry needs 0 < a < b (got a={a}, b={b})"
        )));
    }
    if n == 0.0 {
        return Ok(zero_result(UnitKind::EnergyPerLength));
    }
    let a2 = a * a;
    let b2 = b * b;
    let f = |u: &[f64]| {
        let x = a2 * u[0];
        let v = u[1];
        let w = b2 - x;
        let num = w * w * v + 6.0 * x * w * v * v + 6.0 * x * x * v * v * v;
        Eval::plain(a2 * num / (w * w * w * w))
    };
    let res = integrate_unit_cube(f, 2, f64::INFINITY, cfg);
    finish(res, UnitKind::EnergyPerLength, -32.0 * PI * n / 3.0, cfg)
}

/// Regulated self-energy double integral
/// `−(16N/3) ∫₀^{a²} dx x^{3−β} ∫₀¹ du (u^{2−β} − 6u^{1−β} + 6u^{−β})`,
/// convergent for `β < 1`. Validates the closed form before its analytic
/// continuation to β = 5.
pub fn self_energy_integral_regulated(
    a: f64,
    n_self: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<EnergyResult> {
    cfg.validate()?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("cylinder radius must be positive (got {a})")));
    }
    if !(beta < 1.0) {
        return Err(Error::Domain(format!(
            "regulated integral converges only for beta < 1 (got {beta}); use the closed form beyond"
        )));
    }
    if n_self == 0.0 {
        return Ok(zero_result(UnitKind::EnergyPerLength));
    }
    // x = a² w pulls out (a²)^{4−β}; u = t⁸ softens the u^{−β} endpoint.
    let f = move |uv: &[f64]| {
        let w = uv[0];
        let t = uv[1];
        let wpow = if w == 0.0 { 0.0 } else { w.powf(3.0 - beta) };
        let tpow = |e: f64| if t == 0.0 { 0.0 } else { t.powf(e) };
        let g = 8.0 * (tpow(23.0 - 8.0 * beta) - 6.0 * tpow(15.0 - 8.0 * beta)
            + 6.0 * tpow(7.0 - 8.0 * beta));
        Eval::plain(wpow * g)
    };
    let res = integrate_unit_cube(f, 2, f64::INFINITY, cfg);
    let scale = -(16.0 * n_self / 3.0) * (a * a).powf(4.0 - beta);
    finish(res, UnitKind::EnergyPerLength, scale, cfg)
}
