mod common;

use geodual::geometry::{ellis_radius, GeometryProfile};
use geodual::riccati::ClosedForm;
use geodual::scattering::{
    line_potential_from_geometry, phase_shift_sweep, solve_scattering, solve_scattering_from, Incidence,
    LinePotential, ScatteringNumerics,
};
use proptest::prelude::*;

use common::barrier_transmission;

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn ellis_transmission_agrees_with_quarter_step() {
    let u = LinePotential::ellis(3, 0, 1.0).unwrap();
    let coarse = solve_scattering(&u, 1.0, &ScatteringNumerics::default()).unwrap();
    let fine = solve_scattering(&u, 1.0, &ScatteringNumerics::fixed(coarse.step / 4.0, coarse.window)).unwrap();
    assert!((coarse.transmission() - fine.transmission()).abs() <= 1e-6);
    assert!((coarse.transmission() + coarse.reflection() - 1.0).abs() <= 1e-6);
    assert!(coarse.transmission() > 0.0);
    // value of the quarter-step run, for regression
    assert!((fine.transmission() - 0.774_435_090_5).abs() < 1e-8, "{}", fine.transmission());
}

#[test]
fn ellis_is_always_partly_absorbing() {
    let u = LinePotential::ellis(3, 0, 1.0).unwrap();
    let rec = phase_shift_sweep(&u, &log_grid(0.01, 100.0, 40), &ScatteringNumerics::default(), None).unwrap();
    assert!(rec.eta.iter().all(|&e| e < 1.0));
    assert!(rec.eta[rec.len() - 1] < rec.eta[0]);
    assert!(rec.amplitudes.iter().all(|a| a.transmission() > 0.0));
}

#[test]
fn parity_for_even_wormholes() {
    for (dims, ell) in [(3, 1), (6, 0), (4, 2)] {
        let u = LinePotential::ellis(dims, ell, 1.2).unwrap();
        for eps in [0.05, 0.8, 7.0] {
            let n = ScatteringNumerics::default();
            let right = solve_scattering_from(&u, eps, &n, Incidence::FromRight).unwrap();
            let left = solve_scattering_from(&u, eps, &n, Incidence::FromLeft).unwrap();
            assert!((right.t.norm() - left.t.norm()).abs() <= 1e-8);
            assert!((right.r.norm() - left.r.norm()).abs() <= 1e-8);
        }
    }
}

#[test]
fn tabulated_wormhole_scatters_like_closed_form() {
    let w: Vec<f64> = (-6000..=6000).map(|i| i as f64 * 0.01).collect();
    let radius: Vec<f64> = w.iter().map(|&x| ellis_radius(x, 1.0)).collect();
    let u_tab = line_potential_from_geometry(&GeometryProfile::tabulated(w, radius).unwrap(), 3, 1).unwrap();
    let u_exact = LinePotential::ellis(3, 1, 1.0).unwrap();
    // both on the same finite window
    let n = ScatteringNumerics {
        step: None,
        window: Some(60.0),
    };
    for eps in [0.5, 2.0, 6.0] {
        let a = solve_scattering(&u_tab, eps, &n).unwrap();
        let b = solve_scattering(&u_exact, eps, &n).unwrap();
        assert!((a.transmission() - b.transmission()).abs() <= 1e-6, "eps = {eps}");
    }
}

#[test]
fn five_dimensional_wormhole_has_only_the_tail() {
    for ell in 0..3 {
        let u = LinePotential::ellis(5, ell, 1.0).unwrap();
        let c = u.tail_strength();
        for w in [-3.0, 0.0, 0.7, 10.0] {
            assert_eq!(u.value(w), c / (1.0 + w * w));
        }
    }
}

fn gaussian(amplitude: f64, centre: f64, width: f64) -> LinePotential {
    let f = ClosedForm::new("gaussian", move |w| amplitude * (-((w - centre) / width).powi(2)).exp());
    LinePotential::custom(f, centre.abs() + 7.0 * width).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn barrier_matches_textbook(height in 0.2f64..6.0, a in 0.2f64..2.0, eps in 0.05f64..10.0) {
        let u = LinePotential::square_barrier(height, a).unwrap();
        let got = solve_scattering(&u, eps, &ScatteringNumerics::default()).unwrap();
        prop_assert!((got.transmission() - barrier_transmission(height, a, eps)).abs() <= 1e-6);
    }

    #[test]
    fn asymmetric_potentials_are_reciprocal_and_unitary(
        amplitude in -3.0f64..3.0,
        centre in -2.0f64..2.0,
        width in 0.3f64..1.5,
        eps in 0.1f64..5.0,
    ) {
        let u = gaussian(amplitude, centre, width);
        let n = ScatteringNumerics::default();
        let right = solve_scattering_from(&u, eps, &n, Incidence::FromRight).unwrap();
        let left = solve_scattering_from(&u, eps, &n, Incidence::FromLeft).unwrap();
        prop_assert!(right.flux_defect.abs() <= 1e-6);
        prop_assert!(left.flux_defect.abs() <= 1e-6);
        prop_assert!((right.t - left.t).norm() <= 1e-6);
        prop_assert!((right.r.norm() - left.r.norm()).abs() <= 1e-6);
    }

    #[test]
    fn wormhole_sweeps_stay_in_the_unitarity_disc(dims in 2u32..8, ell in 0u32..3, throat in 0.5f64..2.0) {
        let u = LinePotential::ellis(dims, ell, throat).unwrap();
        let rec = phase_shift_sweep(&u, &log_grid(0.05, 20.0, 6), &ScatteringNumerics::default(), None).unwrap();
        for z in &rec.argand {
            prop_assert!((z - num_complex::Complex64::new(0.0, 0.5)).norm() <= 0.5 + 1e-6);
        }
    }
}
