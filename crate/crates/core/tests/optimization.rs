mod common;

use common::scenarios::*;
use proptest::prelude::*;

use qve_core::spsa::{exact_cost, gain_sequences, minimize, spsa_gradient, SpsaConfig};
use qve_core::zne::{extrapolate, FitModel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spsa_difference_is_exact_on_quadratics(
        diag in prop::collection::vec(0.1f64..3.0, 4),
        lin in prop::collection::vec(-2.0f64..2.0, 4),
        theta in prop::collection::vec(-2.0f64..2.0, 4),
        signs in prop::collection::vec(any::<bool>(), 4),
        c in 0.01f64..0.5,
    ) {
        let f = |t: &[f64]| t.iter().zip(&diag).zip(&lin).map(|((x, a), b)| a * x * x + b * x).sum::<f64>();
        let delta: Vec<f64> = signs.iter().map(|&s| if s { 1.0 } else { -1.0 }).collect();
        let g = spsa_gradient(&mut exact_cost(f), &theta, c, &delta, 0).unwrap();
        // the central difference equals the directional derivative exactly
        let directional: f64 = theta.iter().zip(&diag).zip(&lin).zip(&delta)
            .map(|(((x, a), b), d)| (2.0 * a * x + b) * d).sum();
        for (gi, di) in g.iter().zip(&delta) {
            prop_assert!((gi * di - directional).abs() < 1e-9 * (1.0 + directional.abs()));
        }
    }

    #[test]
    fn polynomial_fits_recover_synthetic_curves(
        a in -20.0f64..-10.0, b in -1.0f64..1.0, c2 in -0.1f64..0.1,
    ) {
        let lambdas = [1.0, 3.0, 5.0, 7.0];
        let line: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, a + b * l)).collect();
        prop_assert!((extrapolate(&line, FitModel::Linear).unwrap().e0 - a).abs() < 1e-8);
        let quad: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, a + b * l + c2 * l * l)).collect();
        prop_assert!((extrapolate(&quad, FitModel::Quadratic).unwrap().e0 - a).abs() < 1e-10);
    }

    #[test]
    fn exponential_fit_recovers_decays(a in -16.0f64..-14.0, b in -2.0f64..-0.1, c in 0.05f64..1.0) {
        let pts: Vec<(f64, f64)> = [1.0, 3.0, 5.0, 7.0].iter().map(|&l| (l, a + b * (-c * l).exp())).collect();
        let fit = extrapolate(&pts, FitModel::Exponential).unwrap();
        prop_assert!(!fit.fallback);
        prop_assert!((fit.e0 - (a + b)).abs() < 1e-6, "{} vs {}", fit.e0, a + b);
    }
}

#[test]
fn four_hundred_iterations_cost_1251_evaluations() {
    let cfg = SpsaConfig::default();
    assert_eq!(cfg.total_evaluations(), 1251);
    let mut calls = 0u64;
    let mut indices = Vec::new();
    let mut f = |t: &[f64], i: u64| {
        calls += 1;
        indices.push(i);
        exact_cost(|t: &[f64]| t.iter().map(|x| (x - 0.5).powi(2)).sum())(t, i)
    };
    let mut fevals = Vec::new();
    let out = minimize(&mut f, &[0.0; 3], &cfg, 11, |r| {
        fevals.push(r.function_evals_so_far);
        Ok(())
    })
    .unwrap();
    assert_eq!(out.evaluations, 1251);
    assert_eq!(calls, 1251);
    assert_eq!(indices, (0..1251).collect::<Vec<u64>>());
    assert!(fevals.iter().enumerate().all(|(k, &f)| f == 50 + 3 * (k + 1)));
    assert!(out.theta.iter().all(|t| (t - 0.5).abs() < 1e-2));
}

#[test]
fn gain_sequence_values() {
    let cfg = SpsaConfig::default();
    let (_, c1) = gain_sequences(&cfg, 1.0, 1).unwrap();
    let (a2, c2) = gain_sequences(&cfg, 1.0, 2).unwrap();
    assert_eq!(c1, 0.2);
    assert!((c2 - 0.18648).abs() < 5e-6);
    assert!((a2 - 2f64.powf(-0.602)).abs() < 1e-15);
}

#[test]
fn preset_step_skips_calibration() {
    let cfg = SpsaConfig {
        a: Some(0.1),
        maxiter: 10,
        ..SpsaConfig::default()
    };
    assert_eq!(cfg.total_evaluations(), 31);
    let mut f = exact_cost(|t: &[f64]| t[0] * t[0]);
    let out = minimize(&mut f, &[1.0], &cfg, 0, |_| Ok(())).unwrap();
    assert_eq!((out.evaluations, out.a), (31, 0.1));
}

#[test]
fn noise_raises_the_hartree_fock_energy() {
    let e = hf_energy_vs_noise(&[0.0, 0.005, 0.01, 0.02], 100_000, 7);
    assert!(e.windows(2).all(|w| w[0] <= w[1]), "{e:?}");
    assert!((e[0] - -15.56033).abs() < 0.01);
}

#[test]
fn quadratic_extrapolation_beats_raw() {
    let theta = beh2_hea_optimum();
    let wins = (0..10)
        .filter(|&s| {
            let (raw, quad) = zne_trial(&theta, 0.01, 40_000, s);
            quad < raw
        })
        .count();
    assert!(wins >= 8, "{wins}/10");
}
