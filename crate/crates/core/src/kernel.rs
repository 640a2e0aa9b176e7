//! The Casimir-Polder pair kernel, built up from the free electromagnetic
//! Green's dyadic.
//!
//! The chain is: scalar Helmholtz Green's function at Euclidean frequency ζ
//! → dyadic components `(∇ᵢ∇ⱼ − ζ²δᵢⱼ)G₀` → contraction of two dyadics →
//! integral over ζ (which evaluates to 23) → the `−23 χ₁χ₂/((4π)³ s⁷)` pair
//! kernel and its axially reduced `s⁻⁶` counterpart.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::integrate::gk;
use crate::material::MaterialPair;

/// A (separation, Euclidean frequency) evaluation point with the
/// dimensionless combination `t = |ζ| R` precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    separation: f64,
    zeta: f64,
    t: f64,
}

impl KernelPoint {
    pub fn new(separation: f64, zeta: f64) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::Domain(format!(
                "kernel point needs a positive separation (got {separation}); the kernel is singular at contact"
            )));
        }
        if !zeta.is_finite() {
            return Err(Error::Domain(format!("frequency must be finite (got {zeta})")));
        }
        Ok(KernelPoint { separation, zeta, t: zeta.abs() * separation })
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `t = |ζ| R`.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn scalar_green(&self) -> f64 {
        (-self.t).exp() / (4.0 * PI * self.separation)
    }
}

/// Scalar Helmholtz Green's function at Euclidean frequency,
/// `e^{−|ζ|R}/(4πR)`.
pub fn scalar_green(r_sep: f64, zeta: f64) -> Result<f64> {
    Ok(KernelPoint::new(r_sep, zeta)?.scalar_green())
}

/// Component `(Γ₀)ᵢⱼ = (∇ᵢ∇ⱼ − ζ²δᵢⱼ) G₀(r − r′)` of the free Green's
/// dyadic, from the closed form
/// `[−δᵢⱼ(1+t+t²) + (RᵢRⱼ/R²)(3+3t+t²)] e^{−t}/(4πR³)`.
///
/// The finite-difference route lives only in the test oracle; the closed
/// form is exact and fast.
pub fn dyadic_component(
    r: [f64; 3],
    r_prime: [f64; 3],
    zeta: f64,
    i: usize,
    j: usize,
) -> Result<f64> {
    assert!(i < 3 && j < 3, "axis indices must be 0..3 (got {i}, {j})");
    let d = [r[0] - r_prime[0], r[1] - r_prime[1], r[2] - r_prime[2]];
    let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if r2 == 0.0 {
        return Err(Error::Domain("dyadic component is singular at coincident points".into()));
    }
    let sep = r2.sqrt();
    let t = zeta.abs() * sep;
    let diag = if i == j { -(1.0 + t + t * t) } else { 0.0 };
    let dir = d[i] * d[j] / r2 * (3.0 + 3.0 * t + t * t);
    Ok((diag + dir) * (-t).exp() / (4.0 * PI * sep * sep * sep))
}

/// Contraction of two dyadic factors,
/// `Σᵢⱼ (Γ₀)ᵢⱼ (Γ₀)ᵢⱼ · (4πR³)² = (6 + 12t + 10t² + 4t³ + 2t⁴) e^{−2t}`.
pub fn contraction_polynomial(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("contraction argument t must be >= 0 (got {t})")));
    }
    Ok((6.0 + t * (12.0 + t * (10.0 + t * (4.0 + 2.0 * t)))) * (-2.0 * t).exp())
}

/// Integrand of the frequency integral after the substitution `u = 2|ζ|R`.
pub fn frequency_integrand(u: f64) -> f64 {
    (-u).exp() * (6.0 + u * (6.0 + u * (2.5 + u * (0.5 + 0.125 * u))))
}

/// Numerically evaluates `∫₀^∞ du e^{−u}(6 + 6u + 5u²/2 + u³/2 + u⁴/8)`,
/// which must equal 23.
///
/// The integrand is smooth and exponentially damped, so adaptive
/// Gauss-Kronrod panels on `[0, U]` suffice; at `U = 60` the analytic tail
/// bound is below 2e-20.
pub fn frequency_integral() -> Result<f64> {
    let res = gk::adaptive(frequency_integrand, 0.0, 60.0, 1e-13, 1e-13, 100_000);
    if !res.converged {
        return Err(Error::Numerical(format!(
            "frequency integral did not converge: residual estimate {:.3e}",
            res.error
        )));
    }
    Ok(res.value)
}

/// Analytic remainder of the frequency integral beyond a cutoff `U`:
/// `∫_U^∞ e^{−u} u^k du = e^{−U} Σ_{j=0..k} (k!/j!) U^j` termwise.
pub fn frequency_integral_tail(u_max: f64) -> f64 {
    let coeff = [6.0, 6.0, 2.5, 0.5, 0.125];
    let mut tail = 0.0;
    for (k, &c) in coeff.iter().enumerate() {
        let mut term = u_max.powi(k as i32); // j = k contribution, k!/k! = 1
        let mut sum = term;
        for j in (0..k).rev() {
            term = term / u_max * (j + 1) as f64;
            sum += term;
        }
        tail += c * sum;
    }
    (-u_max).exp() * tail
}

/// Casimir-Polder pair kernel between volume elements,
/// `−23 χ₁χ₂ / ((4π)³ s⁷)`. The total interaction energy of two disjoint
/// dilute bodies is this kernel integrated over both volumes.
pub fn pair_kernel_3d(s: f64, mat: &MaterialPair) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!(
            "pair kernel needs a positive separation (got {s})"
        )));
    }
    Ok(-23.0 * mat.chi_product() / ((4.0 * PI).powi(3) * s.powi(7)))
}

/// Pair kernel between parallel line elements at in-plane separation `s`:
/// the 3D kernel integrated along the axis,
/// `∫ dz (s² + z²)^{−7/2} = (16/15) s⁻⁶`, giving `−(32N/3π) s⁻⁶`.
pub fn pair_kernel_2d(s: f64, mat: &MaterialPair) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!(
            "pair kernel needs a positive separation (got {s})"
        )));
    }
    Ok(-32.0 * mat.coupling() / (3.0 * PI * s.powi(6)))
}
