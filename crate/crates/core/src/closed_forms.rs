//! Closed-form interaction energies for dilute dielectric bodies, the
//! limits connecting them, the eccentric binomial double series, the offset
//! force, and the regulated cylinder self-energy.
//!
//! Every function here has an independent numerical check in the test suite
//! or the acceptance suite: either brute-force pair summation
//! ([`crate::integrate`]), finite differences, or a second algebraic route.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Geometry;

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite (got {v})")))
    }
}

/// Interaction energy per unit length of two externally separated parallel
/// cylinders (radii `a`, `b`, axis separation `r_axes > a + b`):
///
/// `−(32πN/3)(a²b²/R⁶) · [1 − (a²+b²)/2R² − ((a²−b²)/R²)²/2]
///   / {[1 − ((a+b)/R)²][1 − ((a−b)/R)²]}^{5/2}`.
pub fn energy_cyl_cyl(a: f64, b: f64, r_axes: f64, n: f64) -> Result<f64> {
    require_positive("cylinder radius a", a)?;
    require_positive("cylinder radius b", b)?;
    require_positive("axis separation r_axes", r_axes)?;
    if r_axes <= a + b {
        return Err(Error::Overlap(format!(
            "cylinders touch or overlap: r_axes={r_axes} <= a+b={}",
            a + b
        )));
    }
    let r2 = r_axes * r_axes;
    let sum = (a * a + b * b) / r2;
    let diff = (a * a - b * b) / r2;
    let num = 1.0 - 0.5 * sum - 0.5 * diff * diff;
    let plus = (a + b) / r_axes;
    let minus = (a - b) / r_axes;
    let den = ((1.0 - plus * plus) * (1.0 - minus * minus)).powf(2.5);
    Ok(-(32.0 * PI * n / 3.0) * (a * a * b * b) / (r2 * r2 * r2) * num / den)
}

/// Energy per unit length of a cylinder of radius `a` parallel to a
/// dielectric plane, axis at distance `z > a`: `−Nπa²z/(z²−a²)^{5/2}`
/// (identically `−Nπa²/z⁴ · (1−a²/z²)^{−5/2}`).
pub fn energy_cyl_plane(a: f64, z: f64, n: f64) -> Result<f64> {
    require_positive("cylinder radius a", a)?;
    require_positive("axis-to-plane distance z", z)?;
    if z <= a {
        return Err(Error::Overlap(format!("cylinder intersects the plane: z={z} <= a={a}")));
    }
    Ok(-n * PI * a * a * z / (z * z - a * a).powf(2.5))
}

/// Energy of a sphere of radius `a` centered a distance `z > a` above a
/// dielectric plane: `−N·v/z⁴ · (1−a²/z²)⁻²` with `v = 4πa³/3`.
pub fn energy_sphere_plane(a: f64, z: f64, n: f64) -> Result<f64> {
    require_positive("sphere radius a", a)?;
    require_positive("center-to-plane distance z", z)?;
    if z <= a {
        return Err(Error::Overlap(format!("sphere intersects the plane: z={z} <= a={a}")));
    }
    let v = 4.0 * PI * a * a * a / 3.0;
    let u = 1.0 - (a * a) / (z * z);
    Ok(-n * v / (z * z * z * z) / (u * u))
}

/// Energy per unit area, per unit thickness, of a thin sheet parallel to a
/// half-space at distance `z`: `dE/(A dz) = −N/z⁴`. Integrating this
/// element over a cross-section gives the cylinder-plane result; over
/// `z ∈ [d, ∞)` it gives the parallel-plate energy.
pub fn slab_element(z: f64, n: f64) -> Result<f64> {
    require_positive("sheet distance z", z)?;
    Ok(-n / (z * z * z * z))
}

/// Energy per unit area of two dilute half-spaces at gap `d`:
/// `−N/(3d³)` (the dilute Lifshitz limit).
pub fn energy_plates_dilute(d: f64, n: f64) -> Result<f64> {
    require_positive("plate gap d", d)?;
    Ok(-n / (3.0 * d * d * d))
}

/// Energy per unit length of a cylinder of radius `a` inside a coaxial
/// cavity of radius `b` in an outer dielectric: `−16πN a²b²/(3(b²−a²)³)`.
pub fn energy_coaxial(a: f64, b: f64, n: f64) -> Result<f64> {
    require_positive("inner radius a", a)?;
    require_positive("cavity radius b", b)?;
    if a >= b {
        return Err(Error::Overlap(format!("coaxial needs a < b (got a={a}, b={b})")));
    }
    let d = b * b - a * a;
    Ok(-16.0 * PI * n * (a * a) * (b * b) / (3.0 * d.powi(3)))
}

/// Shared polynomial pieces of the eccentric energy and force. With
/// `s = offset²`: `p = (b²−a²)² + (a²+b²)s − 2s²` and
/// `q = (b²−a²)² − 2(a²+b²)s + s²`; the energy is `−(16πN/3) a²b² p/q^{5/2}`
/// (the offset-cylinder formula with each bracket multiplied through by
/// `b⁴`). `q > 0` and `p > 0` strictly on the whole contained domain.
fn eccentric_polynomials(a: f64, b: f64, offset: f64) -> (f64, f64) {
    let a2 = a * a;
    let b2 = b * b;
    let s = offset * offset;
    let d = b2 - a2;
    let sum = a2 + b2;
    let p = d * d + sum * s - 2.0 * s * s;
    let q = d * d - 2.0 * sum * s + s * s;
    (p, q)
}

fn validate_eccentric(a: f64, b: f64, offset: f64) -> Result<()> {
    require_positive("inner radius a", a)?;
    require_positive("cavity radius b", b)?;
    if !(offset.is_finite() && offset >= 0.0) {
        return Err(Error::Domain(format!("offset must be non-negative (got {offset})")));
    }
    if offset + a >= b {
        return Err(Error::Overlap(format!(
            "inner cylinder touches the cavity wall: offset + a = {} >= b = {b}",
            offset + a
        )));
    }
    Ok(())
}

/// Energy per unit length of a cylinder of radius `a` displaced by `offset`
/// inside a cavity of radius `b` (`offset + a < b`):
///
/// `−(16πN/3)(a²/b⁴) · [(1−a²/b²)² + (1+a²/b²)R²/b² − 2R⁴/b⁴]
///   / [(1−a²/b²)² + R⁴/b⁴ − 2(1+a²/b²)R²/b²]^{5/2}`, `R = offset`.
///
/// Negative throughout, equal to the coaxial energy at `offset = 0`, and
/// strictly decreasing as the offset grows.
pub fn energy_eccentric(a: f64, b: f64, offset: f64, n: f64) -> Result<f64> {
    validate_eccentric(a, b, offset)?;
    let (p, q) = eccentric_polynomials(a, b, offset);
    Ok(-(16.0 * PI * n / 3.0) * (a * a) * (b * b) * p / q.powf(2.5))
}

/// Restoring force per unit length on the inner cylinder, `−∂E/∂R` of the
/// eccentric energy (analytic quotient-rule derivative):
///
/// `F = (16πN/3) a²b² · 2R · [(S−4s)q + 5(S−s)p] / q^{7/2}`,
/// `s = R²`, `S = a²+b²`.
///
/// Zero at `offset = 0` (unstable equilibrium) and positive for any finite
/// offset: the inner cylinder is pulled toward the nearest wall.
pub fn force_eccentric(a: f64, b: f64, offset: f64, n: f64) -> Result<f64> {
    validate_eccentric(a, b, offset)?;
    let (p, q) = eccentric_polynomials(a, b, offset);
    let s = offset * offset;
    let sum = a * a + b * b;
    let bracket = (sum - 4.0 * s) * q + 5.0 * (sum - s) * p;
    Ok((16.0 * PI * n / 3.0) * (a * a) * (b * b) * 2.0 * offset * bracket / q.powf(3.5))
}

/// Result of a truncated double series: the partial sum plus a geometric
/// estimate of the discarded tail (large when the expansion variables are
/// close to the convergence boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    /// Estimated magnitude of the truncation error; `INFINITY` when the
    /// series is outside (or too near) its convergence domain.
    pub truncation_estimate: f64,
    pub terms: usize,
}

/// Binomial double series for the eccentric energy:
///
/// `−(16πN a²/3b⁴) Σ_{k,m} (a²/b²)^k (R²/b²)^m ((m+1)²/2)
///   C(k+m+1, m+1) C(k+m+2, m+1)`
///
/// summed for `k ≤ n_max`, `m ≤ m_max`. All terms are positive, so partial
/// sums grow monotonically in magnitude toward the closed form. Binomials
/// use a multiplicative recurrence in floating point; orders with
/// `n_max + m_max > 1000` are rejected before the coefficients overflow.
pub fn eccentric_series(
    a: f64,
    b: f64,
    offset: f64,
    n: f64,
    n_max: usize,
    m_max: usize,
) -> Result<SeriesResult> {
    require_positive("inner radius a", a)?;
    require_positive("cavity radius b", b)?;
    if !(offset.is_finite() && offset >= 0.0) {
        return Err(Error::Domain(format!("offset must be non-negative (got {offset})")));
    }
    if a >= b || offset >= b {
        return Err(Error::Domain(format!(
            "series expansion variables need a < b and offset < b (got a={a}, offset={offset}, b={b})"
        )));
    }
    if n_max + m_max > 1000 {
        return Err(Error::Config(format!(
            "series order n_max + m_max = {} exceeds the overflow guard of 1000",
            n_max + m_max
        )));
    }

    let h = (a * a) / (b * b);
    let rho = (offset * offset) / (b * b);

    let mut sum = 0.0f64;
    let mut last_row = 0.0f64; // k = n_max contributions
    let mut last_col = 0.0f64; // m = m_max contributions
    for k in 0..=n_max {
        // C(k+m+1, m+1) and C(k+m+2, m+1) by recurrence in m.
        let mut c1 = (k + 1) as f64;
        let mut c2 = (k + 2) as f64;
        let hk = h.powi(k as i32);
        let mut rm = 1.0;
        for m in 0..=m_max {
            if m > 0 {
                c1 *= (k + m + 1) as f64 / (m + 1) as f64;
                c2 *= (k + m + 2) as f64 / (m + 1) as f64;
                rm *= rho;
            }
            let coeff = ((m + 1) * (m + 1)) as f64 / 2.0 * c1 * c2;
            let term = hk * rm * coeff;
            if !term.is_finite() {
                return Err(Error::Numerical(format!(
                    "series term (k={k}, m={m}) overflowed; parameters too close to touching"
                )));
            }
            sum += term;
            if k == n_max {
                last_row += term;
            }
            if m == m_max {
                last_col += term;
            }
        }
    }

    let prefactor = -(16.0 * PI * n * a * a) / (3.0 * b * b * b * b);
    // Nearest singularity of the closed form is at touching; the tail decays
    // roughly geometrically with ratio ((a + R)/b)².
    let ratio = ((a + offset) / b).powi(2);
    let truncation = if ratio < 1.0 {
        prefactor.abs() * (last_row + last_col) * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };

    Ok(SeriesResult {
        value: prefactor * sum,
        truncation_estimate: truncation,
        terms: (n_max + 1) * (m_max + 1),
    })
}

/// The two-cylinder energy analytically continued into the contained domain
/// `r_axes + a < b` (and, for convenience, evaluated normally in the
/// external domain `r_axes > a + b`).
///
/// The quartic under the 5/2 power is rewritten in the explicitly positive
/// factored form `((a+b)² − R²)((b−a)² − R²)`, positive on both branches,
/// and the overall sign of the root is fixed so the energy is negative. In
/// the contained domain the result equals [`energy_eccentric`] identically;
/// at `r_axes = 0` it reduces to [`energy_coaxial`].
pub fn continue_cyl_cyl_to_contained(a: f64, b: f64, r_axes: f64, n: f64) -> Result<f64> {
    require_positive("cylinder radius a", a)?;
    require_positive("cylinder radius b", b)?;
    if !(r_axes.is_finite() && r_axes >= 0.0) {
        return Err(Error::Domain(format!(
            "axis separation must be non-negative (got {r_axes})"
        )));
    }
    let contained = r_axes + a < b || r_axes + b < a;
    let external = r_axes > a + b;
    if !contained && !external {
        return Err(Error::Domain(format!(
            "axis separation r_axes={r_axes} lies in the touching/overlap band [{}, {}] where the formula diverges",
            (a - b).abs(),
            a + b
        )));
    }
    let r2 = r_axes * r_axes;
    let q = ((a + b) * (a + b) - r2) * ((b - a) * (b - a) - r2);
    let p_ext = 2.0 * r2 * r2 - r2 * (a * a + b * b) - (a * a - b * b) * (a * a - b * b);
    Ok(-(16.0 * PI * n / 3.0) * (a * a) * (b * b) * p_ext.abs() / q.powf(2.5))
}

/// Regulator exponent for the cylinder self-energy. The regulated closed
/// form has simple poles at β ∈ {1, 2, 3}, which are rejected here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegulatorExponent(f64);

impl RegulatorExponent {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Domain(format!("regulator exponent must be finite (got {beta})")));
        }
        if beta == 1.0 || beta == 2.0 || beta == 3.0 {
            return Err(Error::Domain(format!(
                "regulator exponent beta = {beta} is a simple pole of the regulated self-energy"
            )));
        }
        Ok(RegulatorExponent(beta))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Regulated self-energy per unit length of a single dilute cylinder:
/// `−(16N/3)(a²)^{4−β}(5−β)/[(1−β)(2−β)(3−β)]`.
///
/// For β < 1 this equals the convergent double integral implemented in
/// [`crate::integrate::self_energy_integral_regulated`]; the physical value
/// is the continuation to β = 5, where the numerator vanishes.
pub fn self_energy_regulated(a: f64, n_self: f64, beta: RegulatorExponent) -> Result<f64> {
    require_positive("cylinder radius a", a)?;
    let beta = beta.value();
    let den = (1.0 - beta) * (2.0 - beta) * (3.0 - beta);
    Ok(-(16.0 * n_self / 3.0) * (a * a).powf(4.0 - beta) * (5.0 - beta) / den)
}

/// Self-energy of a dilute cylinder to order `(ε−1)²`: exactly zero, being
/// the β → 5 analytic continuation of [`self_energy_regulated`].
pub fn self_energy_dilute_cylinder(a: f64, _n_self: f64) -> Result<f64> {
    require_positive("cylinder radius a", a)?;
    Ok(0.0)
}

/// Closed-form energy of a whole configuration at coupling `n`.
pub fn energy(geometry: &Geometry, n: f64) -> Result<f64> {
    geometry.validate()?;
    match *geometry {
        Geometry::ParallelCylinders { a, b, r_axes } => energy_cyl_cyl(a, b, r_axes, n),
        Geometry::CylinderPlane { a, z } => energy_cyl_plane(a, z, n),
        Geometry::SpherePlane { a, z } => energy_sphere_plane(a, z, n),
        Geometry::Coaxial { a, b } => energy_coaxial(a, b, n),
        Geometry::Eccentric { a, b, offset } => energy_eccentric(a, b, offset, n),
        Geometry::SelfCylinder { a } => self_energy_dilute_cylinder(a, n),
    }
}

/// Closed-form force for geometries where one is defined (the eccentric
/// offset force); `None` elsewhere.
pub fn force(geometry: &Geometry, n: f64) -> Result<Option<f64>> {
    geometry.validate()?;
    match *geometry {
        Geometry::Eccentric { a, b, offset } => force_eccentric(a, b, offset, n).map(Some),
        _ => Ok(None),
    }
}
