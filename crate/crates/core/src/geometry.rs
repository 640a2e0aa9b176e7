//! Validated body configurations for which closed forms exist.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::{Region2D, Region3D, UnitKind};

/// The supported configurations. All lengths are in the single arbitrary
/// unit L of the global convention (ħ = c = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    /// Two externally separated parallel cylinders: radii `a`, `b`, axis
    /// separation `r_axes > a + b`.
    ParallelCylinders { a: f64, b: f64, r_axes: f64 },
    /// Cylinder of radius `a` with its axis a distance `z > a` from the
    /// surface of a dielectric half-space.
    CylinderPlane { a: f64, z: f64 },
    /// Sphere of radius `a` centered a distance `z > a` above a half-space.
    SpherePlane { a: f64, z: f64 },
    /// Cylinder of radius `a` inside a coaxial cavity of radius `b` carved
    /// out of an outer dielectric extending to infinity.
    Coaxial { a: f64, b: f64 },
    /// As `Coaxial` but with the inner axis displaced by `offset`,
    /// `offset + a < b`.
    Eccentric { a: f64, b: f64, offset: f64 },
    /// A single cylinder of radius `a` interacting with itself.
    SelfCylinder { a: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite (got {v})")))
    }
}

impl Geometry {
    pub fn parallel_cylinders(a: f64, b: f64, r_axes: f64) -> Result<Self> {
        let g = Geometry::ParallelCylinders { a, b, r_axes };
        g.validate()?;
        Ok(g)
    }

    pub fn cylinder_plane(a: f64, z: f64) -> Result<Self> {
        let g = Geometry::CylinderPlane { a, z };
        g.validate()?;
        Ok(g)
    }

    pub fn sphere_plane(a: f64, z: f64) -> Result<Self> {
        let g = Geometry::SpherePlane { a, z };
        g.validate()?;
        Ok(g)
    }

    pub fn coaxial(a: f64, b: f64) -> Result<Self> {
        let g = Geometry::Coaxial { a, b };
        g.validate()?;
        Ok(g)
    }

    pub fn eccentric(a: f64, b: f64, offset: f64) -> Result<Self> {
        let g = Geometry::Eccentric { a, b, offset };
        g.validate()?;
        Ok(g)
    }

    pub fn self_cylinder(a: f64) -> Result<Self> {
        let g = Geometry::SelfCylinder { a };
        g.validate()?;
        Ok(g)
    }

    /// Check the variant's strict ordering/non-overlap constraints.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::ParallelCylinders { a, b, r_axes } => {
                positive("cylinder radius a", a)?;
                positive("cylinder radius b", b)?;
                positive("axis separation r_axes", r_axes)?;
                if r_axes > a + b {
                    Ok(())
                } else {
                    Err(Error::Overlap(format!(
                        "parallel cylinders need r_axes > a + b (got r_axes={r_axes}, a+b={})",
                        a + b
                    )))
                }
            }
            Geometry::CylinderPlane { a, z } | Geometry::SpherePlane { a, z } => {
                positive("radius a", a)?;
                positive("axis-to-plane distance z", z)?;
                if z > a {
                    Ok(())
                } else {
                    Err(Error::Overlap(format!(
                        "body of radius {a} intersects the plane at distance z={z}"
                    )))
                }
            }
            Geometry::Coaxial { a, b } => {
                positive("inner radius a", a)?;
                positive("cavity radius b", b)?;
                if a < b {
                    Ok(())
                } else {
                    Err(Error::Overlap(format!("coaxial needs a < b (got a={a}, b={b})")))
                }
            }
            Geometry::Eccentric { a, b, offset } => {
                positive("inner radius a", a)?;
                positive("cavity radius b", b)?;
                if !(offset.is_finite() && offset >= 0.0) {
                    return Err(Error::Domain(format!(
                        "offset must be non-negative (got {offset})"
                    )));
                }
                if offset + a < b {
                    Ok(())
                } else {
                    Err(Error::Overlap(format!(
                        "eccentric needs offset + a < b (got offset+a={}, b={b})",
                        offset + a
                    )))
                }
            }
            Geometry::SelfCylinder { a } => positive("cylinder radius a", a),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Geometry::ParallelCylinders { .. } => "parallel-cylinders",
            Geometry::CylinderPlane { .. } => "cylinder-plane",
            Geometry::SpherePlane { .. } => "sphere-plane",
            Geometry::Coaxial { .. } => "coaxial",
            Geometry::Eccentric { .. } => "eccentric",
            Geometry::SelfCylinder { .. } => "self-cylinder",
        }
    }

    /// Dimension of the configuration's energy.
    pub fn unit_kind(&self) -> UnitKind {
        match self {
            Geometry::SpherePlane { .. } => UnitKind::Energy,
            _ => UnitKind::EnergyPerLength,
        }
    }

    /// The region pair this geometry integrates over in the brute-force
    /// route, or `None` for the self-interaction (which has its own
    /// regulated integral).
    pub fn integration_bodies(&self) -> Option<BodyPair> {
        match *self {
            Geometry::ParallelCylinders { a, b, r_axes } => Some(BodyPair::CrossSections(
                Region2D::Disk { center: [0.0, 0.0], radius: a },
                Region2D::Disk { center: [r_axes, 0.0], radius: b },
            )),
            Geometry::CylinderPlane { a, z } => Some(BodyPair::CrossSections(
                Region2D::Disk { center: [0.0, 0.0], radius: a },
                Region2D::HalfPlane { offset: z },
            )),
            Geometry::SpherePlane { a, z } => Some(BodyPair::Volumes(
                Region3D::Ball { center: [0.0, 0.0, z], radius: a },
                Region3D::HalfSpace { offset: 0.0 },
            )),
            Geometry::Coaxial { a, b } => Some(BodyPair::CrossSections(
                Region2D::Disk { center: [0.0, 0.0], radius: a },
                Region2D::ExteriorDisk { radius: b },
            )),
            Geometry::Eccentric { a, b, offset } => Some(BodyPair::CrossSections(
                Region2D::Disk { center: [offset, 0.0], radius: a },
                Region2D::ExteriorDisk { radius: b },
            )),
            Geometry::SelfCylinder { .. } => None,
        }
    }
}

/// The two integrable bodies realizing a `Geometry`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BodyPair {
    CrossSections(Region2D, Region2D),
    Volumes(Region3D, Region3D),
}
