//! Low-discrepancy (Sobol) and plain Monte Carlo estimators on the unit
//! hypercube, both with honest statistical error estimates.
//!
//! The Sobol generator uses the Joe-Kuo direction numbers with Gray-code
//! updates. Error estimation uses Cranley-Patterson random shifts: the
//! budget is split across `N_SHIFTS` independently shifted copies of the
//! sequence and the spread of the per-shift means gives the standard error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cubature::Eval;
use super::gk::QuadEstimate;

pub const SOBOL_MAX_DIM: usize = 10;
const BITS: usize = 32;
const N_SHIFTS: usize = 8;

/// Joe-Kuo parameters (degree, polynomial coefficient, initial m's) for
/// dimensions 2..=10; dimension 1 is the van der Corput sequence.
const JOE_KUO: [(u32, u32, [u32; 5]); 9] = [
    (1, 0, [1, 0, 0, 0, 0]),
    (2, 1, [1, 3, 0, 0, 0]),
    (3, 1, [1, 3, 1, 0, 0]),
    (3, 2, [1, 1, 1, 0, 0]),
    (4, 1, [1, 1, 3, 3, 0]),
    (4, 4, [1, 3, 5, 13, 0]),
    (5, 2, [1, 1, 5, 5, 17]),
    (5, 4, [1, 1, 5, 5, 5]),
    (5, 7, [1, 1, 7, 11, 19]),
];

pub struct Sobol {
    dim: usize,
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl Sobol {
    pub fn new(dim: usize) -> Self {
        assert!(
            (1..=SOBOL_MAX_DIM).contains(&dim),
            "Sobol sequence supports 1..={SOBOL_MAX_DIM} dimensions"
        );
        let mut directions = Vec::with_capacity(dim);

        // First dimension: v_k = 2^(32-k).
        let mut v = [0u32; BITS];
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1 << (BITS - 1 - k);
        }
        directions.push(v);

        for &(s, a, m) in JOE_KUO.iter().take(dim.saturating_sub(1)) {
            let s = s as usize;
            let mut v = [0u32; BITS];
            for k in 0..s {
                v[k] = m[k] << (BITS - 1 - k);
            }
            for k in s..BITS {
                let mut vk = v[k - s] ^ (v[k - s] >> s);
                for j in 1..s {
                    if (a >> (s - 1 - j)) & 1 == 1 {
                        vk ^= v[k - j];
                    }
                }
                v[k] = vk;
            }
            directions.push(v);
        }

        Sobol { dim, directions, state: vec![0; dim], index: 0 }
    }

    /// Fill `out[..dim]` with the next point of the sequence.
    pub fn next_point(&mut self, out: &mut [f64]) {
        const SCALE: f64 = 1.0 / 4294967296.0; // 2^-32
        for (o, s) in out.iter_mut().zip(self.state.iter()) {
            *o = *s as f64 * SCALE;
        }
        // Gray-code update: flip the direction indexed by the lowest zero
        // bit of the point counter.
        let c = (!self.index).trailing_zeros() as usize;
        debug_assert!(c < BITS, "Sobol sequence exhausted");
        for (s, v) in self.state.iter_mut().zip(self.directions.iter()) {
            *s ^= v[c];
        }
        self.index += 1;
        let _ = self.dim;
    }
}

fn fract01(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Quasi-Monte Carlo estimate of `∫ f` over `[0,1]^dim`.
///
/// Runs `N_SHIFTS` randomly shifted Sobol streams, doubling the points per
/// shift until the standard error of the shift means meets the tolerance or
/// the budget runs out.
pub fn quasi_random<F: FnMut(&[f64]) -> Eval>(
    mut f: F,
    dim: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
    seed: u64,
) -> QuadEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shifts = Vec::with_capacity(N_SHIFTS);
    for _ in 0..N_SHIFTS {
        let mut s = vec![0.0; dim];
        for v in s.iter_mut() {
            *v = rng.gen::<f64>();
        }
        shifts.push(s);
    }

    let mut streams: Vec<Sobol> = (0..N_SHIFTS).map(|_| Sobol::new(dim)).collect();
    let mut sums = [0.0f64; N_SHIFTS];
    let mut counts = [0u64; N_SHIFTS];
    let mut evals = 0usize;

    let mut raw = vec![0.0; dim];
    let mut pt = vec![0.0; dim];
    let mut batch = 512usize.max(1);

    loop {
        for (k, stream) in streams.iter_mut().enumerate() {
            for _ in 0..batch {
                stream.next_point(&mut raw);
                for i in 0..dim {
                    pt[i] = fract01(raw[i] + shifts[k][i]);
                }
                sums[k] += f(&pt).f;
                counts[k] += 1;
            }
        }
        evals += batch * N_SHIFTS;

        let means: Vec<f64> = (0..N_SHIFTS).map(|k| sums[k] / counts[k] as f64).collect();
        let mean = means.iter().sum::<f64>() / N_SHIFTS as f64;
        let var = means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>()
            / (N_SHIFTS as f64 - 1.0);
        let se = (var / N_SHIFTS as f64).sqrt();

        let tol = abs_tol.max(rel_tol * mean.abs());
        if se <= tol {
            return QuadEstimate { value: mean, error: se, evaluations: evals, converged: true };
        }
        if evals + 2 * batch * N_SHIFTS > max_evals {
            return QuadEstimate { value: mean, error: se, evaluations: evals, converged: false };
        }
        batch *= 2;
    }
}

/// Plain Monte Carlo estimate of `∫ f` over `[0,1]^dim` with a seeded
/// ChaCha stream; the error estimate is the standard error of the mean.
pub fn monte_carlo<F: FnMut(&[f64]) -> Eval>(
    mut f: F,
    dim: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
    seed: u64,
) -> QuadEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pt = vec![0.0; dim];

    // Welford running mean/variance.
    let mut n = 0u64;
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;

    let mut check_at = 4096usize;
    loop {
        for v in pt.iter_mut() {
            *v = rng.gen::<f64>();
        }
        let y = f(&pt).f;
        n += 1;
        let delta = y - mean;
        mean += delta / n as f64;
        m2 += delta * (y - mean);

        let evals = n as usize;
        if evals >= check_at || evals >= max_evals {
            let se = if n > 1 { (m2 / (n as f64 - 1.0) / n as f64).sqrt() } else { f64::INFINITY };
            let tol = abs_tol.max(rel_tol * mean.abs());
            if se <= tol && n > 1 {
                return QuadEstimate { value: mean, error: se, evaluations: evals, converged: true };
            }
            if evals >= max_evals {
                return QuadEstimate { value: mean, error: se, evaluations: evals, converged: false };
            }
            check_at *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_sobol_points_match_reference() {
        // Unshifted 2D Sobol: (0,0), (1/2,1/2), (3/4,1/4), (1/4,3/4), ...
        let mut s = Sobol::new(2);
        let mut p = [0.0; 2];
        s.next_point(&mut p);
        assert_eq!(p, [0.0, 0.0]);
        s.next_point(&mut p);
        assert_eq!(p, [0.5, 0.5]);
        s.next_point(&mut p);
        assert_eq!(p, [0.75, 0.25]);
        s.next_point(&mut p);
        assert_eq!(p, [0.25, 0.75]);
        s.next_point(&mut p);
        assert_eq!(p, [0.375, 0.375]);
    }

    #[test]
    fn qmc_integrates_smooth_6d() {
        // ∫ Π (xᵢ + 1/2) over [0,1]^6 = 1
        let r = quasi_random(
            |x| Eval::plain(x.iter().map(|v| v + 0.5).product()),
            6,
            5e-5,
            0.0,
            2_000_000,
            42,
        );
        assert!(r.converged, "err={:.3e}", r.error);
        assert_relative_eq!(r.value, 1.0, max_relative = 2e-4);
        assert!((r.value - 1.0).abs() <= 3.0 * r.error.max(1e-12));
    }

    #[test]
    fn qmc_is_deterministic_for_fixed_seed() {
        let run = || {
            quasi_random(
                |x| Eval::plain((x[0] * x[1]).sin() + x[2]),
                3,
                1e-7,
                0.0,
                400_000,
                7,
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error.to_bits(), b.error.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn mc_mean_and_error_are_sane() {
        let r = monte_carlo(|x| Eval::plain(x[0]), 1, 0.0, 1e-3, 3_000_000, 11);
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 5e-3);
    }
}
