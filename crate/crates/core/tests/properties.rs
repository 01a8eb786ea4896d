use proptest::prelude::*;

use qillum_core::correlations::{gaussian_discord_with, DiscordOptions, MeasuredMode};
use qillum_core::detection::{return_moments, Hypothesis};
use qillum_core::eom::transmitter_output;
use qillum_core::gaussian::{sample_quadratures, PHYSICALITY_TOL};
use qillum_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stable_coop(gamma_w: f64, frac: f64) -> Cooperativities {
    Cooperativities::new(gamma_w, frac * (gamma_w + 0.5)).unwrap()
}

fn fig3_source() -> (EomParams, EomCoefficients, SourceMoments) {
    let p = EomParams::reference();
    let (c, m) = transmitter_output(&p, Cooperativities::new(5181.95, 668.43).unwrap()).unwrap();
    (p, c, m)
}

fn random_state() -> impl Strategy<Value = TwoModeGaussianState> {
    (0.0f64..20.0, 0.0f64..20.0, 0.0f64..1.0).prop_map(|(n1, n2, t)| {
        let max = (n1.min(n2) * (n1.max(n2) + 1.0)).sqrt();
        standard_form(n1, n2, (t * max).into()).unwrap()
    })
}

proptest! {
    #[test]
    fn local_rotations_preserve_invariants(
        st in random_state(),
        t1 in 0.0f64..std::f64::consts::TAU,
        t2 in 0.0f64..std::f64::consts::TAU,
    ) {
        let rot = st.rotate_local(t1, t2);
        let a = st.symplectic_spectrum().unwrap();
        let b = rot.symplectic_spectrum().unwrap();
        let scale = a.nu_plus.max(1.0);
        prop_assert!((a.nu_plus - b.nu_plus).abs() < 1e-9 * scale);
        prop_assert!((a.nu_minus - b.nu_minus).abs() < 1e-9 * scale);
        prop_assert!((a.nu_ppt_minus - b.nu_ppt_minus).abs() < 1e-9 * scale);
        let ea = coherent_information(&st).unwrap();
        let eb = coherent_information(&rot).unwrap();
        prop_assert!((ea - eb).abs() < 1e-9 * scale);
        prop_assert!((log_negativity(&st).unwrap() - log_negativity(&rot).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn commutators_hold_in_stable_region(gw in -2.0f64..4.0, frac in 0.0f64..0.95) {
        let c = coefficients(stable_coop(10f64.powf(gw), frac)).unwrap();
        prop_assert!((c.microwave_commutator() - 1.0).abs() < 1e-12);
        prop_assert!((c.optical_commutator() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn metric_threshold_matches_log_negativity(
        gw in -2.0f64..4.0,
        frac in 0.01f64..0.99,
        t in prop::sample::select(vec![0.0, 30e-3, 300e-3, 1.0]),
    ) {
        let p = EomParams { t_eom: t, ..EomParams::reference() };
        let (_, m) = transmitter_output(&p, stable_coop(10f64.powf(gw), frac)).unwrap();
        let e = entanglement_metric(&m).unwrap();
        prop_assume!((e - 1.0).abs() > 1e-4);
        let en = log_negativity(&m.state().unwrap()).unwrap();
        prop_assert_eq!(e > 1.0, en > 0.0);
    }

    #[test]
    fn discord_nonnegative_and_products_separable(n1 in 0.0f64..50.0, n2 in 0.0f64..50.0) {
        let st = TwoModeGaussianState::thermal_product(n1, n2).unwrap();
        prop_assert_eq!(log_negativity(&st).unwrap(), 0.0);
        prop_assert!(gaussian_discord(&st).unwrap().abs() < 1e-6);
    }

    #[test]
    fn qi_error_probability_decreases_with_modes(m in 0.0f64..8.0) {
        let (p, coef, src) = fig3_source();
        let ch = TargetChannelParams::from_temperature(0.07, 293.0, p.omega_w).unwrap();
        let rx = ReceiverParams::new(coef, 1.0).unwrap();
        let stats = receiver_statistics(&src, &ch, &rx, &p.occupations()).unwrap();
        let lo = detection::ln_error_probability_qi(&stats, 10f64.powf(m));
        let hi = detection::ln_error_probability_qi(&stats, 10f64.powf(m) * 1.01);
        prop_assert!(hi < lo);
    }
}

#[test]
fn purity_of_squeezed_vacuum() {
    for i in 0..=50 {
        let r = 5.0 * i as f64 / 50.0;
        let st = TwoModeGaussianState::two_mode_squeezed_vacuum(r);
        let s = st.symplectic_spectrum().unwrap();
        // a^2 - c^2 = 1 only holds to ε cosh²(2r) once a and c are rounded
        let tol = 1e-10f64.max(64.0 * f64::EPSILON * (2.0 * r).cosh().powi(2));
        assert!((s.nu_minus - 1.0).abs() <= tol, "r = {r}: {s:?}");
        assert!((s.nu_plus - 1.0).abs() <= tol, "r = {r}: {s:?}");
        if r <= 2.0 {
            assert!(st.is_pure(1e-10).unwrap());
        }
    }
}

#[test]
fn source_is_physical_over_cooperativity_grid() {
    for t in [0.0, 30e-3, 300e-3] {
        let p = EomParams {
            t_eom: t,
            ..EomParams::reference()
        };
        for i in 0..=24 {
            let gw = 10f64.powf(-2.0 + 6.0 * i as f64 / 24.0);
            for j in 0..=24 {
                let go = 10f64.powf(-2.0 + 6.0 * j as f64 / 24.0);
                let coop = Cooperativities::new(gw, go).unwrap();
                if !coop.adiabatically_stable() {
                    continue;
                }
                let (_, m) = transmitter_output(&p, coop).unwrap();
                let s = m.state().unwrap().symplectic_spectrum().unwrap();
                assert!(s.nu_minus >= 1.0 - PHYSICALITY_TOL, "T={t} gw={gw} go={go}: {s:?}");
            }
        }
    }
}

#[test]
fn zero_temperature_metric_and_log_negativity_trend() {
    let p = EomParams {
        t_eom: 0.0,
        ..EomParams::reference()
    };
    for gw in [0.1, 10.0, 1000.0] {
        let mut last_e = f64::INFINITY;
        let mut last_en = 0.0;
        for k in 1..40 {
            let coop = stable_coop(gw, k as f64 / 40.0);
            let (_, m) = transmitter_output(&p, coop).unwrap();
            let e = entanglement_metric(&m).unwrap();
            let en = log_negativity(&m.state().unwrap()).unwrap();
            assert!(e < last_e, "gw={gw} k={k}");
            assert!(en > last_en, "gw={gw} k={k}");
            last_e = e;
            last_en = en;
        }
    }
}

#[test]
fn pure_state_correlation_identities() {
    for r in [0.1, 0.25, 0.5, 1.0, 1.5, 2.0] {
        let st = TwoModeGaussianState::two_mode_squeezed_vacuum(r);
        let s = gaussian::entropy((2.0 * r).cosh()).unwrap();
        assert!((gaussian_discord(&st).unwrap() - s).abs() < 1e-5);
        assert!((coherent_information(&st).unwrap() - s).abs() < 1e-5);
    }
}

#[test]
fn discord_minimizer_restarts_agree() {
    let (_, _, src) = fig3_source();
    let states = [
        src.state().unwrap(),
        standard_form(2.0, 0.5, 0.9.into()).unwrap(),
        standard_form(30.0, 3.0, 5.0.into()).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for st in &states {
        let reference = gaussian_discord(st).unwrap();
        for _ in 0..10 {
            let opts = DiscordOptions {
                start: Some([
                    rng.random_range(-9.0..9.0),
                    rng.random_range(0.0..std::f64::consts::PI),
                ]),
                ..Default::default()
            };
            let d = gaussian_discord_with(st, MeasuredMode::Second, &opts).unwrap();
            assert!((d.discord - reference).abs() < 1e-7, "{} vs {reference}", d.discord);
        }
    }
}

#[test]
fn sample_covariance_matches_within_five_standard_errors() {
    let (_, _, src) = fig3_source();
    for st in [src.state().unwrap(), TwoModeGaussianState::two_mode_squeezed_vacuum(0.5)] {
        let n = 1_000_000;
        let mut acc = nalgebra::Matrix4::<f64>::zeros();
        for q in sample_quadratures(&st, n, 42) {
            acc += q * q.transpose();
        }
        let est = acc / n as f64;
        let v = st.cm();
        for i in 0..4 {
            for j in 0..4 {
                let se = ((v[(i, i)] * v[(j, j)] + v[(i, j)].powi(2)) / n as f64).sqrt();
                assert!((est[(i, j)] - v[(i, j)]).abs() <= 5.0 * se, "({i},{j})");
            }
        }
    }
}

#[test]
fn vacuum_and_tmsv_sampling_examples() {
    let n = 1_000_000;
    let vac = TwoModeGaussianState::vacuum();
    let mut sq = [0.0; 4];
    for q in sample_quadratures(&vac, n, 1) {
        for k in 0..4 {
            sq[k] += q[k] * q[k];
        }
    }
    for s in sq {
        assert!((s / n as f64 - 1.0).abs() < 0.01);
    }
    let st = TwoModeGaussianState::two_mode_squeezed_vacuum(0.5);
    let xs: Vec<f64> = sample_quadratures(&st, n, 2).map(|q| q[0] * q[2]).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    assert!((mean - 1f64.sinh()).abs() < 3.0 * (var / n as f64).sqrt());
}

#[test]
fn figure_of_merit_falls_with_idler_loss() {
    let (p, coef, src) = fig3_source();
    let ch = TargetChannelParams::from_temperature(0.07, 293.0, p.omega_w).unwrap();
    let mut last = f64::INFINITY;
    for i in 0..=18 {
        let kappa = 1.0 - 0.05 * i as f64;
        let rx = ReceiverParams::new(coef, kappa).unwrap();
        let f = figure_of_merit(&src, &ch, &rx, &p.occupations()).unwrap();
        assert!(f <= last);
        last = f;
    }
}

#[test]
fn return_cross_correlation_ignores_background() {
    let (_, _, src) = fig3_source();
    let mut last_n = -1.0;
    let mut cross = None;
    for n_b in [0.0, 0.1, 10.0, 610.0, 1e5] {
        for exact in [false, true] {
            let ch = TargetChannelParams::new(0.07, 0.0, n_b).unwrap().exact(exact);
            let r = return_moments(&src, &ch, Hypothesis::H1);
            let c = *cross.get_or_insert(r.cross);
            assert_eq!(r.cross, c);
        }
        let ch = TargetChannelParams::new(0.07, 0.0, n_b).unwrap();
        let r = return_moments(&src, &ch, Hypothesis::H1);
        assert!(r.n_r > last_n);
        last_n = r.n_r;
    }
}

#[test]
fn return_entanglement_vanishes_above_threshold() {
    let (_, _, src) = fig3_source();
    for eta in [0.01, 0.07, 0.3] {
        let thr = entanglement_threshold(&src, eta).unwrap();
        for factor in [0.2, 0.8, 0.99, 1.01, 2.0, 1e4] {
            let ch = TargetChannelParams::new(eta, 0.0, factor * thr).unwrap().exact(true);
            let st = return_state(&src, &ch, Hypothesis::H1).unwrap();
            assert_eq!(log_negativity(&st).unwrap() > 0.0, factor < 1.0, "eta={eta} factor={factor}");
        }
        // the approximate H1 background shifts the boundary to thr/(1-η)
        for factor in [0.5, 1.0 / (1.0 - eta) + 0.05] {
            let ch = TargetChannelParams::new(eta, 0.0, factor * thr).unwrap();
            let st = return_state(&src, &ch, Hypothesis::H1).unwrap();
            assert_eq!(log_negativity(&st).unwrap() > 0.0, factor < 1.0);
        }
    }
}

#[test]
fn room_temperature_return_is_separable() {
    let (p, _, src) = fig3_source();
    let ch = TargetChannelParams::from_temperature(0.07, 293.0, p.omega_w).unwrap();
    let st = return_state(&src, &ch, Hypothesis::H1).unwrap();
    assert_eq!(log_negativity(&st).unwrap(), 0.0);
}

#[test]
fn stability_verdicts_agree_away_from_boundary() {
    let p = EomParams::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let gw = 10f64.powf(rng.random_range(-2.0..4.0));
        let go = 10f64.powf(rng.random_range(-2.0..4.0));
        let coop = Cooperativities::new(gw, go).unwrap();
        let s = is_stable(coop, &p);
        if ((go - gw - 0.5) / (gw + 0.5)).abs() < 0.05 {
            continue;
        }
        assert_eq!(s.stable, s.adiabatic, "gw={gw} go={go} {s:?}");
    }
}
