//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL|REPORT` line;
//! run with `--nocapture` (or read the captured output of failures) to see them.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::Instant;

use qcausal_core::density::DensityMatrix as Dm;
use qcausal_core::error_model::{p_err_asymptotic, p_err_limiting, ErrorModelParams};
use qcausal_core::experiment::{probe_eq9_offset, sweep_theta, ExperimentConfig, Measure};
use qcausal_core::metrics::{bures_distance, process_fidelity, trace_distance, ChoiMatrix};
use qcausal_core::random::{random_density, random_state, random_unitary};
use qcausal_core::strategy::max_configurations;
use qcausal_core::{
    build_u_per, count_controlled_bell, Circuit, GateOp, PermutationStrategy, RegisterLayout, StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_1_layout_identity() {
    let layout = RegisterLayout::new(4, 1).unwrap();
    let ok = layout.total_qubits() == 10 && layout.n_a() == 4 && layout.n_b() == 4 && layout.n_ref() == 2;
    report(1, ok, &format!("k=4 d=1 total_qubits={}", layout.total_qubits()));
    assert!(ok);
}

#[test]
fn criterion_2_limiting_error_asymptote() {
    let rel = |r: u64| {
        let params = ErrorModelParams::new(r, 2, 4).unwrap();
        let (lim, asym): (f64, f64) = (p_err_limiting(&params), 1.0 / (4.0 * r as f64 * 16.0));
        assert_eq!(asym, p_err_asymptotic::<f64>(&params));
        (lim - asym).abs() / asym
    };
    let rels: Vec<f64> = [10, 100, 1_000, 10_000].into_iter().map(rel).collect();
    let monotone = rels.windows(2).all(|w| w[1] < w[0]);
    let ok = rels[2] < 1e-4 && monotone;
    report(2, ok, &format!("relative gap at r=1e3 {:.3e}, gaps {:?}", rels[2], rels.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>()));
    assert!(ok);
}

#[test]
fn criterion_3_extrema_structure() {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        k: 2,
        theta_steps: 161,
        ..ExperimentConfig::default()
    };
    let reps = sweep_theta(&cfg).unwrap();
    let p: Vec<f64> = reps.iter().map(|r| r.p_err_simulated).collect();
    let step = 4.0 * PI / 160.0;
    let n = p.len();
    let is_max = |i: usize| (i == 0 || p[i] >= p[i - 1]) && (i + 1 == n || p[i] >= p[i + 1]);
    let is_min = |i: usize| i > 0 && i + 1 < n && p[i] <= p[i - 1] && p[i] <= p[i + 1];
    let maxima: Vec<f64> = (0..n).filter(|&i| is_max(i)).map(|i| reps[i].theta).collect();
    let minima: Vec<f64> = (0..n).filter(|&i| is_min(i)).map(|i| reps[i].theta).collect();
    let near = |found: &[f64], want: &[f64]| {
        found.len() == want.len() && found.iter().zip(want).all(|(f, w)| (f - w).abs() <= step + 1e-12)
    };
    let ok = near(&maxima, &[0.0, 2.0 * PI, 4.0 * PI]) && near(&minima, &[PI, 3.0 * PI]);
    let secs = start.elapsed().as_secs_f64();
    report(3, ok && secs < 10.0, &format!("maxima at {maxima:.4?}, minima at {minima:.4?} ({secs:.2}s)"));
    assert!(ok);
}

#[test]
fn criterion_4_bures_meets_hs_at_even_multiples() {
    let mut worst: f64 = 0.0;
    for k in [2, 4] {
        for theta in [0.0, 2.0 * PI] {
            let cfg = ExperimentConfig {
                k,
                theta_start: theta,
                theta_end: theta + 1.0,
                theta_steps: 2,
                ..ExperimentConfig::default()
            };
            let rep = &sweep_theta(&cfg).unwrap()[0];
            worst = worst.max((rep.delta_by_measure[&Measure::Bures] - rep.delta_by_measure[&Measure::Hs]).abs());
        }
    }
    let ok = worst < 1e-8;
    report(4, ok, &format!("max |bures - hs| = {worst:.3e} over N_B in {{2, 4}}"));
    assert!(ok);
}

#[test]
fn criterion_5_identical_hypotheses() {
    let mut worst_delta: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for k in [2, 4] {
        for r in 1..=k {
            let cfg = ExperimentConfig {
                k,
                r,
                theta_steps: 2,
                ..ExperimentConfig::default()
            };
            let rep = &sweep_theta(&cfg).unwrap()[0];
            worst_p = worst_p.max((rep.p_err_simulated - 0.5).abs());
            worst_delta = rep.delta_by_measure.values().fold(worst_delta, |w, d| w.max(d.abs()));
        }
    }
    let ok = worst_delta < 1e-10 && worst_p < 1e-10;
    report(5, ok, &format!("max |delta| = {worst_delta:.3e}, max |p - 1/2| = {worst_p:.3e}"));
    assert!(ok);
}

#[test]
fn criterion_6_resource_growth() {
    let layout = RegisterLayout::new(4, 1).unwrap();
    let by_r: Vec<u64> = (1..=4)
        .map(|r| count_controlled_bell(&layout, r).unwrap().controlled_bell_count)
        .collect();
    let linear = by_r.iter().enumerate().all(|(i, c)| *c == by_r[0] * (i as u64 + 1));

    let sizes: Vec<(usize, u64, u64)> = (2..=6)
        .map(|n| {
            let c = count_controlled_bell(&RegisterLayout::new(n, 1).unwrap(), 1).unwrap();
            (n, c.controlled_bell_count, c.total_primitive_gates)
        })
        .collect();
    let doubling = sizes.windows(2).all(|w| w[1].1 >= 2 * w[0].1);
    report(
        6,
        linear && doubling,
        &format!(
            "linear in r: {linear} {by_r:?}; doubling per qubit: {doubling} \
             (n, controlled_bell, primitive) = {sizes:?}"
        ),
    );
    assert!(linear, "count not linear in r: {by_r:?}");
    assert!(doubling, "controlled-Bell count does not double per subsystem qubit: {sizes:?}");
}

#[test]
fn criterion_7_offset_probe() {
    let start = Instant::now();
    let cfg = ExperimentConfig::default();
    let probe = probe_eq9_offset(&cfg).unwrap();
    let quantitative = (probe.offset - 0.194).abs() <= 0.05;
    let others: Vec<String> = (2..=4)
        .map(|r| {
            let p = probe_eq9_offset(&ExperimentConfig { r, measures: vec![], ..cfg.clone() }).unwrap();
            format!("r={r}: {:.4}", p.offset)
        })
        .collect();
    println!(
        "criterion 7: {} offset={:.4} (target 0.194 +/- 0.05) for k=4 d=1 r=1: p_limiting={:.4}, \
         min simulated Helstrom error={:.4} at theta={:.4}; {} [{:.1}s]",
        if quantitative { "PASS" } else { "REPORT" },
        probe.offset,
        probe.p_err_limiting,
        probe.min_simulated,
        probe.theta_at_min,
        others.join(", "),
        start.elapsed().as_secs_f64()
    );
    assert!(probe.offset.is_finite() && (0.0..=0.5).contains(&probe.offset));
}

const CASES: usize = 100;

fn random_circuit(rng: &mut ChaCha8Rng, n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..10 {
        let q = rng.random_range(0..n);
        let op = match rng.random_range(0..4) {
            0 => GateOp::h(q),
            1 => GateOp::ry(q, rng.random_range(-7.0..7.0)),
            2 if n > 1 => GateOp::bell_prep(q, (q + 1) % n),
            _ => GateOp::raw(random_unitary(2, rng), vec![q]).unwrap(),
        };
        c.push(op).unwrap();
    }
    c
}

fn random_choi(rng: &mut ChaCha8Rng) -> ChoiMatrix<f64> {
    let rank = rng.random_range(1..=4);
    ChoiMatrix::from_density(random_density(2, rank, rng).unwrap()).unwrap()
}

#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tol = 1e-9;
    let mut failures = Vec::new();

    let (mut norm_dev, mut round_trip_dev): (f64, f64) = (0.0, 0.0);
    for _ in 0..CASES {
        let n = rng.random_range(1..=6);
        let start_state: StateVector = random_state(n, &mut rng).unwrap();
        let circuit = random_circuit(&mut rng, n);
        let mut s = start_state.clone();
        circuit.apply(&mut s).unwrap();
        norm_dev = norm_dev.max((s.norm() - 1.0).abs());
        circuit.inverse().apply(&mut s).unwrap();
        let dev = s.amplitudes().iter().zip(start_state.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        round_trip_dev = round_trip_dev.max(dev);
    }
    if norm_dev >= tol {
        failures.push(format!("norm {norm_dev:.2e}"));
    }
    if round_trip_dev >= tol {
        failures.push(format!("round trip {round_trip_dev:.2e}"));
    }

    let (mut axiom_dev, mut fvdg_dev): (f64, f64) = (0.0, 0.0);
    for _ in 0..CASES {
        let (a, b, c) = (random_choi(&mut rng), random_choi(&mut rng), random_choi(&mut rng));
        let td = |x: &ChoiMatrix<f64>, y: &ChoiMatrix<f64>| trace_distance(x, y).unwrap();
        let angle = |x: &ChoiMatrix<f64>, y: &ChoiMatrix<f64>| bures_distance(x, y).unwrap().max(0.0).sqrt();
        axiom_dev = axiom_dev
            .max(td(&a, &a).abs())
            .max((td(&a, &b) - td(&b, &a)).abs())
            .max(td(&a, &c) - td(&a, &b) - td(&b, &c))
            .max((angle(&a, &b) - angle(&b, &a)).abs())
            .max(angle(&a, &c) - angle(&a, &b) - angle(&b, &c));
        let (t, f) = (td(&a, &b), process_fidelity(&a, &b).unwrap().clamp(0.0, 1.0));
        fvdg_dev = fvdg_dev.max(1.0 - f.sqrt() - t).max(t - (1.0 - f).sqrt());
    }
    if axiom_dev >= tol {
        failures.push(format!("metric axioms {axiom_dev:.2e}"));
    }
    if fvdg_dev >= tol {
        failures.push(format!("Fuchs-van de Graaf {fvdg_dev:.2e}"));
    }

    let mut partial_dev: f64 = 0.0;
    for _ in 0..CASES {
        let rho: Dm<f64> = random_density(3, rng.random_range(1..=3), &mut rng).unwrap();
        let keep = [rng.random_range(0..3)];
        partial_dev = partial_dev.max((rho.partial_trace(&keep).unwrap().trace().re - 1.0).abs());
    }
    if partial_dev >= tol {
        failures.push(format!("partial trace {partial_dev:.2e}"));
    }

    let mut count_cases = 0;
    for k in 1..=5 {
        for d in 1..=5 {
            let Ok(layout) = RegisterLayout::new(k, d) else { continue };
            if layout.total_qubits() > 14 {
                continue;
            }
            for r in 1..=max_configurations(&layout) {
                for seed in 0..5 {
                    let strategy = PermutationStrategy::random(&layout, r, seed).unwrap();
                    let built = build_u_per::<f64>(&layout, &strategy).unwrap().1;
                    if built != count_controlled_bell(&layout, r).unwrap() {
                        failures.push(format!("count mismatch k={k} d={d} r={r}"));
                    }
                    count_cases += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && count_cases >= CASES && secs < 60.0;
    report(
        8,
        ok,
        &format!(
            "{CASES} cases per suite, {count_cases} count cases; norm {norm_dev:.1e}, round trip \
             {round_trip_dev:.1e}, axioms {axiom_dev:.1e}, FvdG {fvdg_dev:.1e} ({secs:.1}s) {failures:?}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_9_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_qcausal"))
            .args(["sweep", "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    let secs = start.elapsed().as_secs_f64();
    let ok = a == b && !a.is_empty() && secs < 20.0;
    report(9, ok, &format!("{} bytes, identical: {} ({secs:.1}s)", a.len(), a == b));
    assert!(ok);
}
