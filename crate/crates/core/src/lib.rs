//! Retarded van der Waals (Casimir-Polder) interaction energies and forces
//! between dilute dielectric bodies.
//!
//! For bodies whose permittivities are close to one, the interaction energy
//! is exactly the pairwise sum of the `−23 χ₁χ₂/((4π)³ s⁷)` potential over
//! both volumes. This crate provides:
//!
//! - [`kernel`]: the pair kernel built from the free electromagnetic
//!   Green's dyadic, with each construction step checkable on its own;
//! - [`closed_forms`]: closed-form energies for parallel cylinders,
//!   cylinder-plane, sphere-plane, coaxial and eccentric cylinders, the
//!   offset force, the eccentric binomial series, geometric analytic
//!   continuation, and the regulated cylinder self-energy;
//! - [`integrate`]: adaptive multidimensional brute-force summation of the
//!   kernel over region pairs, acting as an independent oracle for every
//!   closed form;
//! - [`cli`]: the `casimir-polder` command-line front end (`eval`,
//!   `integrate`, `sweep`, `verify`).
//!
//! Units are natural (ħ = c = 1) with all lengths in one arbitrary unit L:
//! total energies carry dimension 1/L, per-length energies 1/L², and the
//! coupling `N = 23(ε₁−1)(ε₂−1)/(640π²)` is dimensionless.
//!
//! ```
//! use casimir_polder::{closed_forms, coupling_n, Geometry};
//!
//! let n = coupling_n(0.1, 0.1);
//! let geometry = Geometry::coaxial(1.0, 2.0).unwrap();
//! let e = closed_forms::energy(&geometry, n).unwrap();
//! assert!(e < 0.0);
//! ```

pub mod checks;
pub mod cli;
pub mod closed_forms;
mod error;
pub mod geometry;
pub mod integrate;
pub mod kernel;
pub mod material;

pub use error::{Error, Result};
pub use geometry::{BodyPair, Geometry};
pub use integrate::{EnergyResult, Method, QuadratureConfig, UnitKind};
pub use material::{coupling_n, MaterialPair};
