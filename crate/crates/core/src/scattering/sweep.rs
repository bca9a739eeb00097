use num_complex::Complex64;
use rayon::prelude::*;

use super::line::LinePotential;
use super::numerov::{solve_scattering, ScatteringAmplitudes, ScatteringNumerics};
use crate::error::{domain, Result};

/// Below this `|r|` the phase of `r` is roundoff and `δ` is reported as 0.
pub const ETA_FLOOR: f64 = 1e-12;

/// Elastic-channel summary over an energy grid, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftRecord {
    pub epsilon: Vec<f64>,
    /// Inelasticity `|r|`.
    pub eta: Vec<f64>,
    /// `½ arg r`, in `(−π/2, π/2]`.
    pub delta: Vec<f64>,
    pub argand: Vec<Complex64>,
    pub amplitudes: Vec<ScatteringAmplitudes>,
}

impl PhaseShiftRecord {
    pub fn len(&self) -> usize {
        self.epsilon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilon.is_empty()
    }
}

/// `(η e^{2iδ} − 1)/(2i)`; lies in the disc of radius ½ about `i/2` when `η ≤ 1`.
pub fn argand_point(eta: f64, delta: f64) -> Complex64 {
    (Complex64::from_polar(eta, 2.0 * delta) - 1.0) / Complex64::new(0.0, 2.0)
}

/// Solve at every energy in parallel. `jobs` caps the worker count; results
/// do not depend on it.
pub fn phase_shift_sweep(
    potential: &LinePotential,
    energies: &[f64],
    numerics: &ScatteringNumerics,
    jobs: Option<usize>,
) -> Result<PhaseShiftRecord> {
    if energies.is_empty() {
        return domain("energy grid is empty");
    }
    let solve = || -> Result<Vec<ScatteringAmplitudes>> {
        energies
            .par_iter()
            .map(|&eps| solve_scattering(potential, eps, numerics))
            .collect()
    };
    let amplitudes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| crate::Error::Domain(format!("thread pool: {e}")))?
            .install(solve)?,
        None => solve()?,
    };

    let eta: Vec<f64> = amplitudes.iter().map(|a| a.r.norm()).collect();
    let delta: Vec<f64> = amplitudes
        .iter()
        .map(|a| if a.r.norm() <= ETA_FLOOR { 0.0 } else { 0.5 * a.r.arg() })
        .collect();
    let argand = eta.iter().zip(&delta).map(|(&e, &d)| argand_point(e, d)).collect();
    Ok(PhaseShiftRecord {
        epsilon: energies.to_vec(),
        eta,
        delta,
        argand,
        amplitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_line_has_no_phase_shift() {
        let rec = phase_shift_sweep(&LinePotential::zero(), &[0.5, 1.0, 2.0], &ScatteringNumerics::default(), None)
            .unwrap();
        for i in 0..rec.len() {
            assert_eq!(rec.delta[i], 0.0);
            assert!(rec.eta[i] < 1e-10);
        }
    }

    #[test]
    fn argand_points_stay_in_unitarity_disc() {
        let u = LinePotential::ellis(3, 0, 1.0).unwrap();
        let grid: Vec<f64> = (0..12).map(|i| 0.1 * 1.6f64.powi(i)).collect();
        let rec = phase_shift_sweep(&u, &grid, &ScatteringNumerics::default(), Some(2)).unwrap();
        for z in &rec.argand {
            assert!((z - Complex64::new(0.0, 0.5)).norm() <= 0.5 + 1e-9);
        }
        assert!(rec.eta[rec.len() - 1] < rec.eta[0]);
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let u = LinePotential::ellis(4, 1, 1.0).unwrap();
        let grid = [0.2, 0.7, 1.5, 3.0, 6.0];
        let one = phase_shift_sweep(&u, &grid, &ScatteringNumerics::default(), Some(1)).unwrap();
        let four = phase_shift_sweep(&u, &grid, &ScatteringNumerics::default(), Some(4)).unwrap();
        assert_eq!(one, four);
    }
}
