use casimir_polder::integrate::*;
use casimir_polder::{Error, MaterialPair, QuadratureConfig};
use std::time::Instant;

fn report(name: &str, r: Result<EnergyResult, Error>, exact: f64, t: Instant) {
    let res = match r {
        Ok(res) => res,
        Err(Error::NotConverged { result, .. }) => {
            eprintln!("{name}: NOT CONVERGED");
            result
        }
        Err(e) => {
            eprintln!("{name}: ERROR {e}");
            return;
        }
    };
    eprintln!(
        "{name}: value {:+.8e} exact {:+.8e} relerr {:.2e} claimed {:.2e} evals {} time {:?}",
        res.value,
        exact,
        ((res.value - exact) / exact).abs(),
        (res.error_estimate / exact).abs(),
        res.evaluations,
        t.elapsed()
    );
}

#[test]
fn probe_pair_integrals() {
    let mat = MaterialPair::from_coupling(1.0).unwrap();
    let pi = std::f64::consts::PI;

    // coaxial a=1,b=2 -> -64π/81
    for rel in [1e-3, 1e-4] {
        let cfg = QuadratureConfig { rel_tol: rel, max_evaluations: 20_000_000, ..Default::default() };
        let t = Instant::now();
        let r = energy_pair_2d(
            &Region2D::Disk { center: [0.0, 0.0], radius: 1.0 },
            &Region2D::ExteriorDisk { radius: 2.0 },
            &mat,
            &cfg,
        );
        report(&format!("coax-adapt rel={rel:.0e}"), r, -64.0 * pi / 81.0, t);
    }

    // eccentric a=0.5,b=2,off=0.5 -> -0.5038331567317272
    let cfg = QuadratureConfig { rel_tol: 1e-4, max_evaluations: 20_000_000, ..Default::default() };
    let t = Instant::now();
    let r = energy_pair_2d(
        &Region2D::Disk { center: [0.5, 0.0], radius: 0.5 },
        &Region2D::ExteriorDisk { radius: 2.0 },
        &mat,
        &cfg,
    );
    report("ecc-adapt rel=1e-4", r, -0.5038331567317272, t);

    // cyl-plane a=1,z=2 -> -2π/3^2.5
    let t = Instant::now();
    let r = energy_pair_2d(
        &Region2D::Disk { center: [0.0, 0.0], radius: 1.0 },
        &Region2D::HalfPlane { offset: 2.0 },
        &mat,
        &cfg,
    );
    report("cylplane-adapt rel=1e-4", r, -2.0 * pi / 3.0f64.powf(2.5), t);

    // cyl-cyl a=b=1, R=3 -> -0.17761506875520256
    let t = Instant::now();
    let r = energy_pair_2d(
        &Region2D::Disk { center: [0.0, 0.0], radius: 1.0 },
        &Region2D::Disk { center: [3.0, 0.0], radius: 1.0 },
        &mat,
        &cfg,
    );
    report("cylcyl-adapt rel=1e-4", r, -0.17761506875520256, t);

    // sphere-plane a=1,z=2 -> -4π/27, 6D
    for (label, method, rel, evals) in [
        ("sphereplane-auto", Method::AdaptiveSubdivision, 1e-4, 10_000_000usize),
        ("sphereplane-qmc", Method::QuasiRandom, 1e-4, 10_000_000),
        ("sphereplane-mc", Method::MonteCarlo, 1e-3, 10_000_000),
    ] {
        let cfg = QuadratureConfig { rel_tol: rel, max_evaluations: evals, method, ..Default::default() };
        let t = Instant::now();
        let r = energy_pair_3d(
            &Region3D::Ball { center: [0.0, 0.0, 2.0], radius: 1.0 },
            &Region3D::HalfSpace { offset: 0.0 },
            &mat,
            &cfg,
        );
        report(&format!("{label} rel={rel:.0e}"), r, -4.0 * pi / 27.0, t);
    }

    // self-energy integral beta=0, beta=0.5
    let cfg = QuadratureConfig { rel_tol: 1e-9, max_evaluations: 20_000_000, ..Default::default() };
    let t = Instant::now();
    let r = self_energy_integral_regulated(1.0, 1.0, 0.0, &cfg);
    report("self-reg b=0 rel=1e-9", r, -40.0 / 9.0, t);
    let t = Instant::now();
    let r = self_energy_integral_regulated(1.0, 1.0, 0.5, &cfg);
    report("self-reg b=0.5 rel=1e-9", r, -12.8, t);

    // reduced coaxial at 1e-7
    let cfg = QuadratureConfig { rel_tol: 1e-7, max_evaluations: 2_000_000, ..Default::default() };
    let t = Instant::now();
    let r = coaxial_reduced(1.0, 2.0, 1.0, &cfg);
    report("coax-reduced rel=1e-7", r, -64.0 * pi / 81.0, t);
}
