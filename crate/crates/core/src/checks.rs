//! The verification suite behind `casimir-polder verify`: every closed form
//! checked against its independent numerical route, with measured
//! deviations reported per check.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closed_forms::{self, RegulatorExponent};
use crate::integrate::{self, Method, QuadratureConfig, Region2D, Region3D};
use crate::kernel;
use crate::material::MaterialPair;
use crate::Error;

/// How much evaluation budget the suite spends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Budgets tuned to finish the whole suite in well under a minute.
    Fast,
    /// Larger budgets and tighter integration tolerances.
    Thorough,
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured deviation in the check's own metric (usually relative).
    pub measured: f64,
    /// Limit the deviation must stay below.
    pub threshold: f64,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    fn measure(
        name: &'static str,
        start: Instant,
        measured: f64,
        threshold: f64,
        detail: String,
    ) -> Self {
        Check {
            name,
            passed: measured < threshold,
            measured,
            threshold,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    ((value - reference) / reference).abs()
}

/// Unwrap an integration result, keeping the best estimate when the budget
/// ran out (the deviation check will then fail honestly).
fn take(result: Result<integrate::EnergyResult, Error>) -> integrate::EnergyResult {
    match result {
        Ok(r) => r,
        Err(Error::NotConverged { result, .. }) => result,
        Err(e) => panic!("verification integral failed: {e}"),
    }
}

/// Run the full suite.
pub fn run_all(profile: Profile) -> Vec<Check> {
    vec![
        check_frequency_integral(),
        check_dyadic_oracle(),
        check_contraction_identity(),
        check_sphere_plane(profile),
        check_coaxial_brute_force(profile),
        check_coaxial_reduced(),
        check_eccentric_brute_force(profile),
        check_eccentric_series(),
        check_continuation_identity(),
        check_limits(),
        check_force(),
        check_self_energy(),
        check_determinism(),
        check_error_honesty(profile),
    ]
}

fn check_frequency_integral() -> Check {
    let t = Instant::now();
    match kernel::frequency_integral() {
        Ok(v) => Check::measure(
            "frequency-integral",
            t,
            (v - 23.0).abs(),
            1e-10,
            format!("quadrature {v:.15} vs exact 23"),
        ),
        Err(e) => Check {
            name: "frequency-integral",
            passed: false,
            measured: f64::INFINITY,
            threshold: 1e-10,
            detail: e.to_string(),
            seconds: t.elapsed().as_secs_f64(),
        },
    }
}

/// Second-order central differences of `(∇ᵢ∇ⱼ − ζ²δᵢⱼ)G₀`, independent of
/// the closed-form dyadic implementation.
fn dyadic_finite_difference(r: [f64; 3], rp: [f64; 3], zeta: f64, i: usize, j: usize) -> f64 {
    let dist = |p: [f64; 3]| {
        ((p[0] - rp[0]).powi(2) + (p[1] - rp[1]).powi(2) + (p[2] - rp[2]).powi(2)).sqrt()
    };
    let g = |p: [f64; 3]| kernel::scalar_green(dist(p), zeta).unwrap();
    let sep = dist(r);
    let h = 1e-4 * sep;
    let shift = |mut p: [f64; 3], axis: usize, d: f64| {
        p[axis] += d;
        p
    };
    let second = if i == j {
        (g(shift(r, i, h)) - 2.0 * g(r) + g(shift(r, i, -h))) / (h * h)
    } else {
        (g(shift(shift(r, i, h), j, h)) - g(shift(shift(r, i, h), j, -h))
            - g(shift(shift(r, i, -h), j, h))
            + g(shift(shift(r, i, -h), j, -h)))
            / (4.0 * h * h)
    };
    let delta = if i == j { 1.0 } else { 0.0 };
    second - zeta * zeta * delta * g(r)
}

fn check_dyadic_oracle() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rp: [f64; 3] =
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let dir: [f64; 3] =
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        if norm < 1e-3 {
            continue;
        }
        let sep = rng.gen_range(0.5..5.0);
        let r = [
            rp[0] + sep * dir[0] / norm,
            rp[1] + sep * dir[1] / norm,
            rp[2] + sep * dir[2] / norm,
        ];
        let zeta: f64 = rng.gen_range(0.0..2.0);
        let i = rng.gen_range(0..3);
        let j = rng.gen_range(0..3);
        let exact = kernel::dyadic_component(r, rp, zeta, i, j).unwrap();
        let fd = dyadic_finite_difference(r, rp, zeta, i, j);
        let scale = exact.abs().max(1.0 / (4.0 * PI * sep.powi(3)));
        worst = worst.max((exact - fd).abs() / scale);
    }
    Check::measure(
        "dyadic-finite-difference",
        t,
        worst,
        1e-6,
        "closed-form dyadic vs central differences of G0, 100 random points".into(),
    )
}

fn check_contraction_identity() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rp: [f64; 3] =
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r: [f64; 3] = [
            rp[0] + rng.gen_range(0.3..2.0),
            rp[1] + rng.gen_range(-2.0..2.0),
            rp[2] + rng.gen_range(-2.0..2.0),
        ];
        let zeta: f64 = rng.gen_range(0.0..2.0);
        let sep =
            ((r[0] - rp[0]).powi(2) + (r[1] - rp[1]).powi(2) + (r[2] - rp[2]).powi(2)).sqrt();
        let mut sum = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let g = kernel::dyadic_component(r, rp, zeta, i, j).unwrap();
                sum += g * g;
            }
        }
        let scale = 4.0 * PI * sep.powi(3);
        let poly = kernel::contraction_polynomial(zeta * sep).unwrap();
        worst = worst.max(rel_dev(sum * scale * scale, poly));
    }
    Check::measure(
        "contraction-identity",
        t,
        worst,
        1e-10,
        "component sum vs contraction polynomial, 100 random points".into(),
    )
}

fn check_sphere_plane(profile: Profile) -> Check {
    let t = Instant::now();
    let (rel_tol, budget) = match profile {
        Profile::Fast => (1e-3, 12_000_000),
        Profile::Thorough => (3e-4, 60_000_000),
    };
    let cfg = QuadratureConfig { rel_tol, max_evaluations: budget, ..Default::default() };
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let exact = -4.0 * PI / 27.0;
    let res = take(integrate::energy_pair_3d(
        &Region3D::Ball { center: [0.0, 0.0, 2.0], radius: 1.0 },
        &Region3D::HalfSpace { offset: 0.0 },
        &mat,
        &cfg,
    ));
    Check::measure(
        "sphere-plane-6d",
        t,
        rel_dev(res.value, exact),
        1e-3,
        format!("6D pair sum {:.8e} vs -4pi/27, {} evaluations", res.value, res.evaluations),
    )
}

fn check_coaxial_brute_force(profile: Profile) -> Check {
    let t = Instant::now();
    let rel_tol = match profile {
        Profile::Fast => 3e-4,
        Profile::Thorough => 1e-4,
    };
    let cfg = QuadratureConfig { rel_tol, ..Default::default() };
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let exact = -64.0 * PI / 81.0;
    let res = take(integrate::energy_pair_2d(
        &Region2D::Disk { center: [0.0, 0.0], radius: 1.0 },
        &Region2D::ExteriorDisk { radius: 2.0 },
        &mat,
        &cfg,
    ));
    Check::measure(
        "coaxial-4d",
        t,
        rel_dev(res.value, exact),
        1e-3,
        format!("4D pair sum {:.8e} vs -64pi/81, {} evaluations", res.value, res.evaluations),
    )
}

fn check_coaxial_reduced() -> Check {
    let t = Instant::now();
    let cfg = QuadratureConfig { rel_tol: 1e-8, ..Default::default() };
    let exact = -64.0 * PI / 81.0;
    let res = take(integrate::coaxial_reduced(1.0, 2.0, 1.0, &cfg));
    Check::measure(
        "coaxial-reduced-2d",
        t,
        rel_dev(res.value, exact),
        1e-6,
        format!("reduced integral {:.12e} vs -64pi/81", res.value),
    )
}

fn check_eccentric_brute_force(profile: Profile) -> Check {
    let t = Instant::now();
    let rel_tol = match profile {
        Profile::Fast => 3e-4,
        Profile::Thorough => 1e-4,
    };
    let cfg = QuadratureConfig { rel_tol, ..Default::default() };
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let exact = closed_forms::energy_eccentric(0.5, 2.0, 0.5, 1.0).unwrap();
    let res = take(integrate::energy_pair_2d(
        &Region2D::Disk { center: [0.5, 0.0], radius: 0.5 },
        &Region2D::ExteriorDisk { radius: 2.0 },
        &mat,
        &cfg,
    ));
    Check::measure(
        "eccentric-4d",
        t,
        rel_dev(res.value, exact),
        1e-3,
        format!("4D pair sum {:.8e} vs closed form {exact:.8e}", res.value),
    )
}

fn check_eccentric_series() -> Check {
    let t = Instant::now();
    let exact = closed_forms::energy_eccentric(0.3, 1.0, 0.2, 1.0).unwrap();
    let series = closed_forms::eccentric_series(0.3, 1.0, 0.2, 1.0, 40, 40).unwrap();
    Check::measure(
        "eccentric-series",
        t,
        rel_dev(series.value, exact),
        1e-8,
        format!("40x40 partial sum {:.12e} vs closed form {exact:.12e}", series.value),
    )
}

fn check_continuation_identity() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = rng.gen_range(0.05..0.6);
        let offset = rng.gen_range(0.0..0.9) * (1.0 - a);
        let cont = closed_forms::continue_cyl_cyl_to_contained(a, 1.0, offset, 1.0).unwrap();
        let ecc = closed_forms::energy_eccentric(a, 1.0, offset, 1.0).unwrap();
        worst = worst.max(rel_dev(cont, ecc));
    }
    Check::measure(
        "continuation-identity",
        t,
        worst,
        1e-12,
        "analytically continued two-cylinder energy vs offset formula, 100 configurations".into(),
    )
}

fn check_limits() -> Check {
    let t = Instant::now();
    // Wall radius 10^4 at fixed gap: the cylinder pair must reproduce the
    // cylinder-plane energy to 1e-3 relative.
    let plane = closed_forms::energy_cyl_plane(1.0, 2.0, 1.0).unwrap();
    let cyl = closed_forms::energy_cyl_cyl(1.0, 1.0e4, 1.0e4 + 2.0, 1.0).unwrap();
    let frac1 = rel_dev(cyl, plane) / 1e-3;

    // Coaxial per wall area at b = 10^3, gap 1: dilute Lifshitz to 5e-3.
    let lifshitz = closed_forms::energy_coaxial(999.0, 1000.0, 1.0).unwrap() / (2.0 * PI * 1000.0);
    let plates = closed_forms::energy_plates_dilute(1.0, 1.0).unwrap();
    let frac2 = rel_dev(lifshitz, plates) / 5e-3;

    // Zero offset must reduce to coaxial within 4 ulp.
    let ecc0 = closed_forms::energy_eccentric(0.5, 2.0, 0.0, 1.0).unwrap();
    let coax = closed_forms::energy_coaxial(0.5, 2.0, 1.0).unwrap();
    let frac3 = (ecc0 - coax).abs() / (4.0 * f64::EPSILON * coax.abs());

    Check::measure(
        "limit-chains",
        t,
        frac1.max(frac2).max(frac3),
        1.0,
        format!(
            "fractions of allowance: cyl-plane limit {frac1:.3}, Lifshitz limit {frac2:.3}, zero-offset reduction {frac3:.3}"
        ),
    )
}

fn check_force() -> Check {
    let t = Instant::now();
    let (a, b, n) = (0.5, 2.0, 1.0);
    let zero = closed_forms::force_eccentric(a, b, 0.0, n).unwrap();
    let mut worst = if zero == 0.0 { 0.0 } else { f64::INFINITY };
    for i in 1..=10 {
        let offset = i as f64 / 10.0 * 0.7 * (b - a);
        let h = 1e-6 * b;
        let fd = -(closed_forms::energy_eccentric(a, b, offset + h, n).unwrap()
            - closed_forms::energy_eccentric(a, b, offset - h, n).unwrap())
            / (2.0 * h);
        let f = closed_forms::force_eccentric(a, b, offset, n).unwrap();
        if f <= 0.0 {
            worst = f64::INFINITY;
        }
        worst = worst.max(rel_dev(f, fd));
    }
    Check::measure(
        "eccentric-force",
        t,
        worst,
        1e-6,
        "analytic derivative vs central differences on a 10-point offset grid; force(0) = 0".into(),
    )
}

fn check_self_energy() -> Check {
    let t = Instant::now();
    let beta5 = RegulatorExponent::new(5.0).unwrap();
    let at5 = closed_forms::self_energy_regulated(1.0, 1.0, beta5).unwrap();
    let mut worst = if at5 == 0.0 { 0.0 } else { f64::INFINITY };

    let cfg = QuadratureConfig { rel_tol: 1e-9, ..Default::default() };
    for beta in [0.0, 0.5] {
        let closed =
            closed_forms::self_energy_regulated(1.0, 1.0, RegulatorExponent::new(beta).unwrap())
                .unwrap();
        let quad = take(integrate::self_energy_integral_regulated(1.0, 1.0, beta, &cfg));
        worst = worst.max(rel_dev(quad.value, closed));
    }
    Check::measure(
        "self-energy-regulated",
        t,
        worst,
        1e-8,
        "closed form 0 at beta=5; regulated double integral vs closed form at beta in {0, 0.5}"
            .into(),
    )
}

fn check_determinism() -> Check {
    let t = Instant::now();
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let cfg = QuadratureConfig {
        rel_tol: 1e-3,
        max_evaluations: 400_000,
        method: Method::QuasiRandom,
        seed: 1234,
        ..Default::default()
    };
    let run = || {
        take(integrate::energy_pair_2d(
            &Region2D::Disk { center: [0.5, 0.0], radius: 0.5 },
            &Region2D::ExteriorDisk { radius: 2.0 },
            &mat,
            &cfg,
        ))
    };
    let a = run();
    let b = run();
    let identical = a.value.to_bits() == b.value.to_bits()
        && a.error_estimate.to_bits() == b.error_estimate.to_bits()
        && a.evaluations == b.evaluations;
    Check {
        name: "determinism",
        passed: identical,
        measured: if identical { 0.0 } else { 1.0 },
        threshold: 0.5,
        detail: "two runs with the same seed must agree bit for bit".into(),
        seconds: t.elapsed().as_secs_f64(),
    }
}

/// Deviation-vs-claimed-error bookkeeping across a battery of seeded runs:
/// the measured deviation must stay within 3x the reported estimate for at
/// least 95% of runs.
fn check_error_honesty(profile: Profile) -> Check {
    let t = Instant::now();
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let exact_ecc = closed_forms::energy_eccentric(0.5, 2.0, 0.5, 1.0).unwrap();
    let exact_coax = closed_forms::energy_coaxial(1.0, 2.0, 1.0).unwrap();
    let budget = match profile {
        Profile::Fast => 1_500_000,
        Profile::Thorough => 6_000_000,
    };

    let mut total = 0usize;
    let mut honest = 0usize;
    let mut tally = |value: f64, err: f64, exact: f64| {
        total += 1;
        if (value - exact).abs() <= 3.0 * err {
            honest += 1;
        }
    };

    let disk_ecc = Region2D::Disk { center: [0.5, 0.0], radius: 0.5 };
    let disk_coax = Region2D::Disk { center: [0.0, 0.0], radius: 1.0 };
    let cavity = Region2D::ExteriorDisk { radius: 2.0 };

    for seed in 0..8u64 {
        let cfg = QuadratureConfig {
            rel_tol: 1e-3,
            max_evaluations: budget,
            method: Method::QuasiRandom,
            seed,
            ..Default::default()
        };
        let r = take(integrate::energy_pair_2d(&disk_ecc, &cavity, &mat, &cfg));
        tally(r.value, r.error_estimate, exact_ecc);
    }
    for seed in 0..6u64 {
        let cfg = QuadratureConfig {
            rel_tol: 3e-3,
            max_evaluations: budget,
            method: Method::MonteCarlo,
            seed,
            ..Default::default()
        };
        let r = take(integrate::energy_pair_2d(&disk_coax, &cavity, &mat, &cfg));
        tally(r.value, r.error_estimate, exact_coax);
    }
    for rel_tol in [1e-3, 3e-4, 1e-4] {
        let cfg = QuadratureConfig { rel_tol, max_evaluations: budget, ..Default::default() };
        let r = take(integrate::energy_pair_2d(&disk_coax, &cavity, &mat, &cfg));
        tally(r.value, r.error_estimate, exact_coax);
        let r = take(integrate::energy_pair_2d(&disk_ecc, &cavity, &mat, &cfg));
        tally(r.value, r.error_estimate, exact_ecc);
    }

    let fraction = honest as f64 / total as f64;
    Check {
        name: "error-honesty",
        passed: fraction >= 0.95,
        measured: 1.0 - fraction,
        threshold: 0.05,
        detail: format!("{honest}/{total} runs within 3x the reported error estimate"),
        seconds: t.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_is_all_green() {
        let checks = run_all(Profile::Fast);
        assert_eq!(checks.len(), 14);
        for c in &checks {
            assert!(
                c.passed,
                "{} failed: measured {:.3e} vs threshold {:.3e} ({})",
                c.name, c.measured, c.threshold, c.detail
            );
        }
    }
}
