//! Dielectric contrasts and the derived coupling constant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling constant carrying all material dependence,
/// `23 (ε₁−1)(ε₂−1) / (640 π²)`.
pub fn coupling_n(chi1: f64, chi2: f64) -> f64 {
    23.0 * chi1 * chi2 / (640.0 * PI * PI)
}

/// A pair of dielectric susceptibilities `χ = ε − 1`, one per body.
///
/// The pairwise-summation formulas are exact to order `χ₁ χ₂`, so only the
/// product of the two contrasts ever enters an energy. The coupling constant
/// is always recomputed from the stored contrasts, never cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialPair {
    chi1: f64,
    chi2: f64,
}

impl MaterialPair {
    /// Build from susceptibilities `χ_a = ε_a − 1`.
    pub fn from_susceptibilities(chi1: f64, chi2: f64) -> Result<Self> {
        if !chi1.is_finite() || !chi2.is_finite() {
            return Err(Error::Config(format!(
                "susceptibilities must be finite (got chi1={chi1}, chi2={chi2})"
            )));
        }
        Ok(Self { chi1, chi2 })
    }

    /// Build from permittivities `ε₁`, `ε₂`.
    pub fn from_permittivities(eps1: f64, eps2: f64) -> Result<Self> {
        Self::from_susceptibilities(eps1 - 1.0, eps2 - 1.0)
    }

    /// Build a pair whose coupling constant equals `n` exactly.
    ///
    /// Only the product `χ₁ χ₂` is physical here; the contrast is assigned
    /// entirely to the first body.
    pub fn from_coupling(n: f64) -> Result<Self> {
        if !n.is_finite() {
            return Err(Error::Config(format!("coupling must be finite (got {n})")));
        }
        Self::from_susceptibilities(640.0 * PI * PI * n / 23.0, 1.0)
    }

    /// Both contrasts zero; every interaction energy vanishes.
    pub fn vacuum() -> Self {
        Self { chi1: 0.0, chi2: 0.0 }
    }

    pub fn chi1(&self) -> f64 {
        self.chi1
    }

    pub fn chi2(&self) -> f64 {
        self.chi2
    }

    /// Product `χ₁ χ₂` entering the pair kernel.
    pub fn chi_product(&self) -> f64 {
        self.chi1 * self.chi2
    }

    /// Coupling constant `N = 23 χ₁ χ₂ / (640 π²)`, recomputed on demand.
    pub fn coupling(&self) -> f64 {
        coupling_n(self.chi1, self.chi2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coupling_vanishes_with_either_contrast() {
        assert_eq!(coupling_n(0.0, 3.7), 0.0);
        assert_eq!(coupling_n(-1.5, 0.0), 0.0);
    }

    #[test]
    fn coupling_reference_values() {
        // 23 · 0.01 / (640 π²) and 23 / (640 π²), arbitrary-precision substitution
        assert_relative_eq!(coupling_n(0.1, 0.1), 3.641230037146514e-5, max_relative = 1e-14);
        assert_relative_eq!(coupling_n(1.0, 1.0), 3.641230037146514e-3, max_relative = 1e-14);
    }

    #[test]
    fn pair_recomputes_coupling_identity() {
        let m = MaterialPair::from_permittivities(1.1, 1.3).unwrap();
        assert_relative_eq!(m.coupling(), coupling_n(m.chi1(), m.chi2()), max_relative = 1e-15);
    }

    #[test]
    fn from_coupling_round_trips() {
        let m = MaterialPair::from_coupling(1.0).unwrap();
        assert_relative_eq!(m.coupling(), 1.0, max_relative = 1e-15);
        let m = MaterialPair::from_coupling(-2.5e-4).unwrap();
        assert_relative_eq!(m.coupling(), -2.5e-4, max_relative = 1e-15);
    }

    #[test]
    fn rejects_non_finite_input() {
        assert!(MaterialPair::from_susceptibilities(f64::NAN, 1.0).is_err());
        assert!(MaterialPair::from_permittivities(f64::INFINITY, 1.0).is_err());
        assert!(MaterialPair::from_coupling(f64::NAN).is_err());
    }
}
