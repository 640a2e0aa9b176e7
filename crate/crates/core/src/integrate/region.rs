//! Integrable body descriptions for the brute-force pair summation, with
//! exact minimum-distance predicates and maps from the unit square/cube onto
//! each region.
//!
//! Infinite regions are mapped through algebraic/tangent substitutions whose
//! Jacobians grow slower than the `s⁻⁶`/`s⁻⁷` kernel decay, so the
//! transformed integrand vanishes smoothly at the cube faces and no
//! truncation of the physical domain is ever needed.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Planar cross-section regions (per-unit-length energies).
///
/// `ExteriorDisk` and `Annulus` are centered on the origin; `HalfPlane` is
/// the set `x >= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Region2D {
    Disk { center: [f64; 2], radius: f64 },
    ExteriorDisk { radius: f64 },
    HalfPlane { offset: f64 },
    Annulus { r_in: f64, r_out: f64 },
}

/// Volumetric regions (total energies).
///
/// `HalfSpace` is the set `z <= offset`; `Slab` spans `z0 <= z <= z0 +
/// thickness` with infinite lateral extent; `CylinderSegment` has its axis
/// along z through `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Region3D {
    Ball { center: [f64; 3], radius: f64 },
    HalfSpace { offset: f64 },
    Slab { z0: f64, thickness: f64 },
    CylinderSegment { center: [f64; 3], radius: f64, length: f64 },
}

/// Exact minimum distance between two regions; `overlap` means the closure
/// of the two sets intersects (distance reported as 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub distance: f64,
    pub overlap: bool,
}

impl Separation {
    fn from_gap(gap: f64) -> Self {
        Separation { distance: gap.max(0.0), overlap: gap <= 0.0 }
    }
}

/// Importance context for mapping infinite regions: where the partner body
/// sits and how large the near zone is. The `s⁻⁶`/`s⁻⁷` kernel concentrates
/// its mass within roughly one closest-approach distance of the boundary,
/// so the depth scale sits below the lateral one.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MapCtx {
    pub focus: [f64; 3],
    pub lateral: f64,
    pub depth: f64,
}

impl MapCtx {
    pub(crate) fn none() -> Self {
        MapCtx { focus: [0.0; 3], lateral: 1.0, depth: 1.0 }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite (got {v})")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite (got {v})")))
    }
}

impl Region2D {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Region2D::Disk { center, radius } => {
                check_finite("disk center x", center[0])?;
                check_finite("disk center y", center[1])?;
                check_positive("disk radius", radius)
            }
            Region2D::ExteriorDisk { radius } => check_positive("exterior-disk radius", radius),
            Region2D::HalfPlane { offset } => check_finite("half-plane offset", offset),
            Region2D::Annulus { r_in, r_out } => {
                check_positive("annulus inner radius", r_in)?;
                check_positive("annulus outer radius", r_out)?;
                if r_in < r_out {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "annulus needs r_in < r_out (got r_in={r_in}, r_out={r_out})"
                    )))
                }
            }
        }
    }

    /// Whether the region has finite area.
    pub fn is_bounded(&self) -> bool {
        matches!(self, Region2D::Disk { .. } | Region2D::Annulus { .. })
    }

    /// Area, for bounded regions.
    pub fn measure(&self) -> Option<f64> {
        match *self {
            Region2D::Disk { radius, .. } => Some(PI * radius * radius),
            Region2D::Annulus { r_in, r_out } => Some(PI * (r_out * r_out - r_in * r_in)),
            _ => None,
        }
    }

    /// Bounding-circle center and radius for bounded regions; a reference
    /// point on the boundary for infinite ones.
    pub(crate) fn anchor(&self) -> ([f64; 2], f64) {
        match *self {
            Region2D::Disk { center, radius } => (center, radius),
            Region2D::Annulus { r_out, .. } => ([0.0, 0.0], r_out),
            Region2D::ExteriorDisk { radius } => ([0.0, 0.0], radius),
            Region2D::HalfPlane { offset } => ([offset, 0.0], 0.0),
        }
    }

    /// Map `u ∈ [0,1]²` onto the region, returning the point and the area
    /// Jacobian. The map covers the whole region (infinite tails included).
    pub(crate) fn map_unit(&self, u: [f64; 2], ctx: &MapCtx) -> ([f64; 2], f64) {
        match *self {
            Region2D::Disk { center, radius } => {
                let rho = radius * u[0].sqrt();
                let th = 2.0 * PI * u[1];
                ([center[0] + rho * th.cos(), center[1] + rho * th.sin()], PI * radius * radius)
            }
            Region2D::Annulus { r_in, r_out } => {
                let rho = (r_in * r_in + u[0] * (r_out * r_out - r_in * r_in)).sqrt();
                let th = 2.0 * PI * u[1];
                ([rho * th.cos(), rho * th.sin()], PI * (r_out * r_out - r_in * r_in))
            }
            Region2D::ExteriorDisk { radius } => {
                // ρ = b / sqrt(1-u): ρ dρ = b²/(2(1-u)²) du, so the s⁻⁶ tail
                // becomes a polynomial in the new variable.
                let w = 1.0 - u[0];
                let rho = radius / w.sqrt();
                let th = 2.0 * PI * u[1];
                let jac = PI * radius * radius / (w * w);
                ([rho * th.cos(), rho * th.sin()], jac)
            }
            Region2D::HalfPlane { offset } => {
                let t = u[0];
                let x = offset + ctx.depth * t / (1.0 - t);
                let jx = ctx.depth / ((1.0 - t) * (1.0 - t));
                let ang = PI * (u[1] - 0.5);
                let tn = ang.tan();
                let y = ctx.focus[1] + ctx.lateral * tn;
                let jy = PI * ctx.lateral * (1.0 + tn * tn);
                ([x, y], jx * jy)
            }
        }
    }
}

impl Region3D {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Region3D::Ball { center, radius } => {
                for (axis, c) in ["x", "y", "z"].iter().zip(center) {
                    check_finite(&format!("ball center {axis}"), c)?;
                }
                check_positive("ball radius", radius)
            }
            Region3D::HalfSpace { offset } => check_finite("half-space offset", offset),
            Region3D::Slab { z0, thickness } => {
                check_finite("slab z0", z0)?;
                check_positive("slab thickness", thickness)
            }
            Region3D::CylinderSegment { center, radius, length } => {
                for (axis, c) in ["x", "y", "z"].iter().zip(center) {
                    check_finite(&format!("cylinder center {axis}"), c)?;
                }
                check_positive("cylinder radius", radius)?;
                check_positive("cylinder length", length)
            }
        }
    }

    /// Whether the region has finite volume.
    pub fn is_bounded(&self) -> bool {
        matches!(self, Region3D::Ball { .. } | Region3D::CylinderSegment { .. })
    }

    /// Volume, for bounded regions.
    pub fn measure(&self) -> Option<f64> {
        match *self {
            Region3D::Ball { radius, .. } => Some(4.0 / 3.0 * PI * radius.powi(3)),
            Region3D::CylinderSegment { radius, length, .. } => Some(PI * radius * radius * length),
            _ => None,
        }
    }

    pub(crate) fn anchor(&self) -> ([f64; 3], f64) {
        match *self {
            Region3D::Ball { center, radius } => (center, radius),
            Region3D::CylinderSegment { center, radius, length } => {
                (center, (radius * radius + 0.25 * length * length).sqrt())
            }
            Region3D::HalfSpace { offset } => ([0.0, 0.0, offset], 0.0),
            Region3D::Slab { z0, thickness } => ([0.0, 0.0, z0 + 0.5 * thickness], 0.5 * thickness),
        }
    }

    /// Map `u ∈ [0,1]³` onto the region, returning point and volume Jacobian.
    pub(crate) fn map_unit(&self, u: [f64; 3], ctx: &MapCtx) -> ([f64; 3], f64) {
        match *self {
            Region3D::Ball { center, radius } => {
                let r = radius * u[0].cbrt();
                let cos_t = 2.0 * u[1] - 1.0;
                let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                let phi = 2.0 * PI * u[2];
                let p = [
                    center[0] + r * sin_t * phi.cos(),
                    center[1] + r * sin_t * phi.sin(),
                    center[2] + r * cos_t,
                ];
                (p, 4.0 / 3.0 * PI * radius.powi(3))
            }
            Region3D::CylinderSegment { center, radius, length } => {
                let z = center[2] + (u[0] - 0.5) * length;
                let rho = radius * u[1].sqrt();
                let th = 2.0 * PI * u[2];
                let p = [center[0] + rho * th.cos(), center[1] + rho * th.sin(), z];
                (p, PI * radius * radius * length)
            }
            Region3D::HalfSpace { offset } => {
                let t = u[0];
                let z = offset - ctx.depth * t / (1.0 - t);
                let jz = ctx.depth / ((1.0 - t) * (1.0 - t));
                let ax = PI * (u[1] - 0.5);
                let tx = ax.tan();
                let x = ctx.focus[0] + ctx.lateral * tx;
                let jx = PI * ctx.lateral * (1.0 + tx * tx);
                let ay = PI * (u[2] - 0.5);
                let ty = ay.tan();
                let y = ctx.focus[1] + ctx.lateral * ty;
                let jy = PI * ctx.lateral * (1.0 + ty * ty);
                ([x, y, z], jz * jx * jy)
            }
            Region3D::Slab { z0, thickness } => {
                let z = z0 + u[0] * thickness;
                let ax = PI * (u[1] - 0.5);
                let tx = ax.tan();
                let x = ctx.focus[0] + ctx.lateral * tx;
                let jx = PI * ctx.lateral * (1.0 + tx * tx);
                let ay = PI * (u[2] - 0.5);
                let ty = ay.tan();
                let y = ctx.focus[1] + ctx.lateral * ty;
                let jy = PI * ctx.lateral * (1.0 + ty * ty);
                ([x, y, z], thickness * jx * jy)
            }
        }
    }
}

fn hypot2(dx: f64, dy: f64) -> f64 {
    (dx * dx + dy * dy).sqrt()
}

/// Signed gap between the interval `[lo, hi]` and the point `p` (0 inside).
fn interval_gap(p: f64, lo: f64, hi: f64) -> f64 {
    (lo - p).max(p - hi).max(0.0)
}

/// Gap between two intervals.
fn intervals_gap(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> f64 {
    (b_lo - a_hi).max(a_lo - b_hi)
}

/// Exact minimum distance between two planar regions.
pub fn min_separation_2d(g1: &Region2D, g2: &Region2D) -> Separation {
    use Region2D::*;
    match (*g1, *g2) {
        (Disk { center: c1, radius: r1 }, Disk { center: c2, radius: r2 }) => {
            Separation::from_gap(hypot2(c1[0] - c2[0], c1[1] - c2[1]) - r1 - r2)
        }
        (Disk { center, radius }, ExteriorDisk { radius: b })
        | (ExteriorDisk { radius: b }, Disk { center, radius }) => {
            Separation::from_gap(b - hypot2(center[0], center[1]) - radius)
        }
        (Disk { center, radius }, HalfPlane { offset })
        | (HalfPlane { offset }, Disk { center, radius }) => {
            Separation::from_gap(offset - center[0] - radius)
        }
        (Disk { center, radius }, Annulus { r_in, r_out })
        | (Annulus { r_in, r_out }, Disk { center, radius }) => {
            let d = hypot2(center[0], center[1]);
            // Either fully inside the hole or fully outside the ring.
            Separation::from_gap((r_in - d - radius).max(d - radius - r_out))
        }
        (Annulus { r_out, .. }, ExteriorDisk { radius: b })
        | (ExteriorDisk { radius: b }, Annulus { r_out, .. }) => Separation::from_gap(b - r_out),
        (Annulus { r_out, .. }, HalfPlane { offset })
        | (HalfPlane { offset }, Annulus { r_out, .. }) => Separation::from_gap(offset - r_out),
        (Annulus { r_in: i1, r_out: o1 }, Annulus { r_in: i2, r_out: o2 }) => {
            Separation::from_gap((i2 - o1).max(i1 - o2))
        }
        // Any two regions that both reach infinity necessarily intersect.
        (ExteriorDisk { .. } | HalfPlane { .. }, ExteriorDisk { .. } | HalfPlane { .. }) => {
            Separation { distance: 0.0, overlap: true }
        }
    }
}

/// Exact minimum distance between two volumetric regions.
pub fn min_separation_3d(g1: &Region3D, g2: &Region3D) -> Separation {
    use Region3D::*;
    match (*g1, *g2) {
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => {
            let d = ((c1[0] - c2[0]).powi(2) + (c1[1] - c2[1]).powi(2) + (c1[2] - c2[2]).powi(2))
                .sqrt();
            Separation::from_gap(d - r1 - r2)
        }
        (Ball { center, radius }, HalfSpace { offset })
        | (HalfSpace { offset }, Ball { center, radius }) => {
            Separation::from_gap(center[2] - radius - offset)
        }
        (Ball { center, radius }, Slab { z0, thickness })
        | (Slab { z0, thickness }, Ball { center, radius }) => {
            Separation::from_gap(interval_gap(center[2], z0, z0 + thickness) - radius)
        }
        (Ball { center: bc, radius: br }, CylinderSegment { center: cc, radius: cr, length })
        | (CylinderSegment { center: cc, radius: cr, length }, Ball { center: bc, radius: br }) => {
            let d_radial = (hypot2(bc[0] - cc[0], bc[1] - cc[1]) - cr).max(0.0);
            let d_axial = ((bc[2] - cc[2]).abs() - 0.5 * length).max(0.0);
            Separation::from_gap(hypot2(d_radial, d_axial) - br)
        }
        (HalfSpace { offset }, Slab { z0, .. }) | (Slab { z0, .. }, HalfSpace { offset }) => {
            Separation::from_gap(z0 - offset)
        }
        (HalfSpace { offset }, CylinderSegment { center, length, .. })
        | (CylinderSegment { center, length, .. }, HalfSpace { offset }) => {
            Separation::from_gap(center[2] - 0.5 * length - offset)
        }
        (Slab { z0: a0, thickness: at }, Slab { z0: b0, thickness: bt }) => {
            Separation::from_gap(intervals_gap(a0, a0 + at, b0, b0 + bt))
        }
        (Slab { z0, thickness }, CylinderSegment { center, length, .. })
        | (CylinderSegment { center, length, .. }, Slab { z0, thickness }) => {
            Separation::from_gap(intervals_gap(
                z0,
                z0 + thickness,
                center[2] - 0.5 * length,
                center[2] + 0.5 * length,
            ))
        }
        (
            CylinderSegment { center: c1, radius: r1, length: l1 },
            CylinderSegment { center: c2, radius: r2, length: l2 },
        ) => {
            let d_radial = (hypot2(c1[0] - c2[0], c1[1] - c2[1]) - r1 - r2).max(0.0);
            let d_axial =
                intervals_gap(c1[2] - 0.5 * l1, c1[2] + 0.5 * l1, c2[2] - 0.5 * l2, c2[2] + 0.5 * l2)
                    .max(0.0);
            let gap = hypot2(d_radial, d_axial);
            if gap > 0.0 {
                Separation { distance: gap, overlap: false }
            } else {
                Separation { distance: 0.0, overlap: true }
            }
        }
        (HalfSpace { .. }, HalfSpace { .. }) => Separation { distance: 0.0, overlap: true },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn disk_in_cavity_separation() {
        // Disk of radius a offset by R inside a cavity of radius b: gap b - R - a.
        let disk = Region2D::Disk { center: [0.5, 0.0], radius: 0.5 };
        let cavity = Region2D::ExteriorDisk { radius: 2.0 };
        let s = min_separation_2d(&disk, &cavity);
        assert!(!s.overlap);
        assert_relative_eq!(s.distance, 1.0);
    }

    #[test]
    fn two_disks_separation() {
        let d1 = Region2D::Disk { center: [0.0, 0.0], radius: 1.0 };
        let d2 = Region2D::Disk { center: [3.0, 0.0], radius: 1.0 };
        assert_relative_eq!(min_separation_2d(&d1, &d2).distance, 1.0);
        let touching = Region2D::Disk { center: [2.0, 0.0], radius: 1.0 };
        assert!(min_separation_2d(&d1, &touching).overlap);
    }

    #[test]
    fn ball_above_half_space() {
        let ball = Region3D::Ball { center: [0.0, 0.0, 2.0], radius: 1.0 };
        let half = Region3D::HalfSpace { offset: 0.0 };
        let s = min_separation_3d(&ball, &half);
        assert!(!s.overlap);
        assert_relative_eq!(s.distance, 1.0);
    }

    #[test]
    fn infinite_pairs_always_overlap() {
        let a = Region2D::ExteriorDisk { radius: 1.0 };
        let b = Region2D::HalfPlane { offset: 5.0 };
        assert!(min_separation_2d(&a, &b).overlap);
        let h1 = Region3D::HalfSpace { offset: 0.0 };
        let h2 = Region3D::HalfSpace { offset: 3.0 };
        assert!(min_separation_3d(&h1, &h2).overlap);
    }

    #[test]
    fn parallel_cylinder_segments() {
        let c1 = Region3D::CylinderSegment { center: [0.0, 0.0, 0.0], radius: 0.5, length: 4.0 };
        let c2 = Region3D::CylinderSegment { center: [2.0, 0.0, 0.0], radius: 0.5, length: 4.0 };
        assert_relative_eq!(min_separation_3d(&c1, &c2).distance, 1.0);
        // Axially displaced: corner-to-corner distance.
        let c3 = Region3D::CylinderSegment { center: [2.0, 0.0, 7.0], radius: 0.5, length: 4.0 };
        let s = min_separation_3d(&c1, &c3);
        assert_relative_eq!(s.distance, (1.0f64 + 9.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn disk_map_covers_area() {
        // Integrating the constant 1 over the unit map recovers the area.
        let disk = Region2D::Disk { center: [1.0, -2.0], radius: 1.5 };
        let ctx = MapCtx::none();
        let mut acc = 0.0;
        let n = 64;
        for i in 0..n {
            for j in 0..n {
                let u = [(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64];
                let (_, jac) = disk.map_unit(u, &ctx);
                acc += jac / (n * n) as f64;
            }
        }
        assert_relative_eq!(acc, disk.measure().unwrap(), max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn separation_is_symmetric(
            x in -3.0f64..3.0, y in -3.0f64..3.0, r in 0.1f64..2.0, b in 0.5f64..4.0
        ) {
            let d = Region2D::Disk { center: [x, y], radius: r };
            let e = Region2D::ExteriorDisk { radius: b };
            let s1 = min_separation_2d(&d, &e);
            let s2 = min_separation_2d(&e, &d);
            prop_assert_eq!(s1, s2);
        }

        #[test]
        fn ball_points_stay_inside(u0 in 0.0f64..1.0, u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
            let ball = Region3D::Ball { center: [1.0, 2.0, 3.0], radius: 0.7 };
            let (p, jac) = ball.map_unit([u0, u1, u2], &MapCtx::none());
            let d = ((p[0] - 1.0).powi(2) + (p[1] - 2.0).powi(2) + (p[2] - 3.0).powi(2)).sqrt();
            prop_assert!(d <= 0.7 + 1e-12);
            prop_assert!(jac > 0.0);
        }
    }
}
