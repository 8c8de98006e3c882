//! Discrimination pipeline checked against the analytic overlap of the two
//! hypotheses.

use std::f64::consts::PI;

use qcausal_core::experiment::{run_discrimination, Experiment, sweep_distances, sweep_theta, ExperimentConfig, Measure};
use qcausal_core::metrics::helstrom_error;
use qcausal_core::StrategyKind;

fn config(k: usize, r: usize) -> ExperimentConfig {
    ExperimentConfig {
        k,
        r,
        ..ExperimentConfig::default()
    }
}

/// With Bell-paired registers, only the all-ones cause branch sees the
/// rotation on each of the `n` effect qubits, so the two final states overlap
/// in `1 - (1 - cos^n(theta/2)) / 2^n`.
fn analytic_error(n: usize, theta: f64) -> f64 {
    let ov = 1.0 - (1.0 - (theta / 2.0).cos().powi(n as i32)) / (1u64 << n) as f64;
    (1.0 - (1.0 - ov * ov).max(0.0).sqrt()) / 2.0
}

#[test]
fn simulated_error_matches_analytic_overlap() {
    for k in 1..=4 {
        let mut cfg = config(k, 1);
        cfg.measures.clear();
        cfg.theta_steps = 23;
        for rep in sweep_theta(&cfg).unwrap() {
            let expected = analytic_error(k, rep.theta);
            assert!(
                (rep.p_err_simulated - expected).abs() < 1e-10,
                "k={k} theta={} got {} want {expected}",
                rep.theta,
                rep.p_err_simulated
            );
        }
    }
}

/// Several configurations: compare with the dense Helstrom error of the
/// explicitly reduced A (x) B density matrices.
#[test]
fn simulated_error_matches_dense_reduction() {
    for (k, r) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
        let mut cfg = config(k, r);
        cfg.measures.clear();
        let exp = Experiment::new(cfg).unwrap();
        let keep: Vec<usize> = exp.layout().a_qubits().into_iter().chain(exp.layout().b_qubits()).collect();
        for theta in [0.0, 0.7, PI, 4.0, 2.0 * PI] {
            let (null, alt) = exp.final_states(theta).unwrap();
            let expected = helstrom_error(
                &null.reduced_density(&keep).unwrap(),
                &alt.reduced_density(&keep).unwrap(),
            )
            .unwrap();
            let got = exp.run(theta).unwrap().p_err_simulated;
            assert!((got - expected).abs() < 1e-10, "k={k} r={r} theta={theta}: {got} vs {expected}");
        }
    }
}

#[test]
fn identical_hypotheses_are_indistinguishable() {
    for k in [2, 4] {
        let rep = run_discrimination(&config(k, 1), 0.0).unwrap();
        assert!((rep.p_err_simulated - 0.5).abs() < 1e-10);
        for m in Measure::ALL {
            assert!(rep.delta_by_measure[&m].abs() < 1e-10);
        }
    }
}

#[test]
fn error_falls_and_distance_grows_on_first_half_period() {
    let mut cfg = config(2, 1);
    cfg.theta_end = PI;
    cfg.theta_steps = 41;
    let reps = sweep_theta(&cfg).unwrap();
    for pair in reps.windows(2) {
        assert!(pair[1].p_err_simulated <= pair[0].p_err_simulated + 1e-12);
        let (a, b) = (pair[0].delta_by_measure[&Measure::Trace], pair[1].delta_by_measure[&Measure::Trace]);
        assert!(b >= a - 1e-12);
    }
}

#[test]
fn distances_have_the_expected_period() {
    // RY(theta + 2 pi) = -RY(theta): even effect registers see period 2 pi.
    for (k, period) in [(2, 2.0 * PI), (3, 4.0 * PI), (4, 2.0 * PI)] {
        let grid = |start: f64| ExperimentConfig {
            theta_start: start,
            theta_end: start + 3.0,
            theta_steps: 7,
            ..config(k, 1)
        };
        let a = sweep_distances(&grid(0.4)).unwrap();
        let b = sweep_distances(&grid(0.4 + period)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for m in Measure::ALL {
                assert!((x.delta_by_measure[&m] - y.delta_by_measure[&m]).abs() < 1e-9, "k={k} {m}");
            }
        }
    }
}

#[test]
fn distances_do_not_depend_on_r() {
    let reference = sweep_distances(&config(3, 1)).unwrap();
    for r in 2..=3 {
        assert_eq!(sweep_distances(&config(3, r)).unwrap(), reference);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let mut cfg = config(3, 4);
    cfg.strategy = StrategyKind::Random;
    cfg.seed = 99;
    cfg.theta_steps = 9;
    assert_eq!(sweep_theta(&cfg).unwrap(), sweep_theta(&cfg).unwrap());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(sweep_theta(&ExperimentConfig { theta_steps: 1, ..config(2, 1) }).is_err());
    assert!(sweep_theta(&ExperimentConfig { theta_end: -1.0, ..config(2, 1) }).is_err());
    assert!(sweep_theta(&config(2, 0)).is_err());
    assert!(sweep_theta(&config(2, 3)).is_err());
    assert!(sweep_theta(&config(5, 1)).is_err());
}
