//! Acceptance suite: one test per release criterion, each ending in a
//! printed PASS line (run with `--nocapture` to see them). Expected values
//! are either closed-form constants or recomputed here by independent
//! routes (enumeration oracles, direct formula evaluation, brute-force
//! counting) rather than read back from the implementation.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

use num_complex::Complex64;
use posearch_core::qsim::StateVector;
use posearch_core::{
    analytic_2d, baseline_query_estimate, embed_x_register, grover_iterate, reduced_x_register,
    run_baseline, run_search, schedule_for, search_rng, sub_rng, ModelledState, ScramblerSpec,
    StageOracle,
};
use rand::Rng;

fn pass(line: &str) {
    println!("PASS {line}");
}

/// Independent iteration-count oracle: the smallest g whose total rotation
/// (4g + 2) * asin(sqrt(lambda)) reaches pi.
fn smallest_iteration_count(lambda: f64) -> u32 {
    let theta = lambda.sqrt().asin();
    let mut g = 0u32;
    while (4.0 * f64::from(g) + 2.0) * theta < PI - 1e-9 {
        g += 1;
    }
    g
}

/// Independent phase oracle: the matched-phase formula evaluated directly.
/// Only well-conditioned away from arg = 1; boundary cases are asserted
/// against their closed forms instead.
fn direct_phase(lambda: f64, g: u32) -> f64 {
    let arg = (PI / (4.0 * f64::from(g) + 2.0)).sin() / lambda.sqrt();
    2.0 * arg.min(1.0).asin()
}

#[test]
fn criterion_1_schedule_formulas() {
    // (lambda, expected g, closed-form alpha where one exists)
    let lambda_14 = (2.0f64).powi(-14);
    let cases: [(f64, u32, Option<f64>); 5] = [
        (1.0, 0, None),
        (0.5, 1, Some(FRAC_PI_2)),
        (0.25, 1, Some(PI)),
        (1.0 / 16.0, 3, None),
        (lambda_14, 101, None),
    ];
    for (lambda, expected_g, alpha_closed) in cases {
        let s = schedule_for(lambda).unwrap();
        assert_eq!(s.g, expected_g, "g({lambda})");
        if lambda < 1.0 {
            assert_eq!(
                smallest_iteration_count(lambda),
                expected_g,
                "oracle g({lambda})"
            );
        }
        if let Some(alpha) = alpha_closed {
            assert!(
                (s.alpha - alpha).abs() < 1e-12,
                "alpha({lambda}) = {} vs {alpha}",
                s.alpha
            );
        }
    }
    // direct-evaluation cross-check where the formula is well conditioned
    for lambda in [0.5, 1.0 / 16.0, lambda_14] {
        let s = schedule_for(lambda).unwrap();
        assert!((s.alpha - direct_phase(lambda, s.g)).abs() < 1e-12);
    }
    // at lambda = 1/4 the direct float evaluation sits a few 1e-8 under the
    // closed form pi because the arcsine argument rounds just below 1; the
    // schedule must land on pi itself
    assert!((direct_phase(0.25, 1) - PI).abs() < 1e-7);
    assert_eq!(schedule_for(0.25).unwrap().alpha, PI);
    pass("criterion 1: schedule formulas (g exact, alpha within 1e-12, cross-checked)");
}

#[test]
fn criterion_2_fixed_point_determinism() {
    let n = 10;
    // identity scrambler: flag j reads key bit j, so stage 1 targets bit 1
    let spec = ScramblerSpec::from_parts(n, (0..n).collect(), 0, (1 << n) - 1).unwrap();
    let mut worst = 0.0f64;
    for lambda in [0.5, 0.25, 0.1, 0.01, (2.0f64).powi(-14)] {
        let s = schedule_for(lambda).unwrap();

        let (_, on) = analytic_2d(lambda, s.alpha, s.g).unwrap();
        let analytic_gap = (on.norm_sqr() - 1.0).abs();
        assert!(
            analytic_gap < 1e-9,
            "analytic lambda = {lambda}: {analytic_gap:e}"
        );

        // full statevector: product start state carrying weight lambda on bit 1
        let mut probs = vec![0.5; n];
        probs[0] = lambda;
        let model = ModelledState::from_probs(probs).unwrap();
        let mut oracle = StageOracle::new(&spec, 1, s.alpha).unwrap();
        let mut sv = model.prepare().unwrap();
        for _ in 0..s.g {
            grover_iterate(&mut sv, &mut oracle, &model, s.alpha).unwrap();
        }
        let sim_gap = (sv.probability_mass(|x| x & 1 == 1) - 1.0).abs();
        assert!(sim_gap < 1e-9, "statevector lambda = {lambda}: {sim_gap:e}");
        worst = worst.max(analytic_gap).max(sim_gap);
    }
    pass(&format!(
        "criterion 2: fixed-point determinism, 5 weights, analytic + statevector, worst |1-p| = {worst:.2e}"
    ));
}

#[test]
fn criterion_3_oracle_equivalence() {
    let mut worst_dev = 0.0f64;
    let mut worst_residual = 0.0f64;
    for n in [3usize, 4] {
        let spec = ScramblerSpec::random(n, 300 + n as u64).unwrap();
        for ell in 0..=n {
            for alpha in [FRAC_PI_2, PI] {
                for state_seed in [0u64, 1] {
                    let x_state = if state_seed == 0 {
                        let mut sv = StateVector::zero(n).unwrap();
                        sv.apply_walsh_hadamard().unwrap();
                        sv
                    } else {
                        random_state(n, 500 + (n * 10 + ell) as u64)
                    };

                    let mut diag = x_state.clone();
                    StageOracle::new(&spec, ell, alpha)
                        .unwrap()
                        .apply(&mut diag)
                        .unwrap();

                    let mut joint = embed_x_register(&x_state).unwrap();
                    StageOracle::new(&spec, ell, alpha)
                        .unwrap()
                        .apply_full_circuit(&mut joint)
                        .unwrap();
                    let (block, residual) = reduced_x_register(&joint, n).unwrap();
                    assert!(residual < 1e-12, "leaked mass {residual:e}");
                    worst_residual = worst_residual.max(residual);
                    for x in 0..1u64 << n {
                        let dev = (block[x as usize] - diag.amplitude(x).unwrap()).norm();
                        assert!(dev < 1e-9, "n={n} ell={ell} alpha={alpha} x={x}: {dev:e}");
                        worst_dev = worst_dev.max(dev);
                    }
                }
            }
        }
    }
    pass(&format!(
        "criterion 3: oracle equivalence n in {{3,4}}, worst amplitude dev = {worst_dev:.2e}, worst leaked mass = {worst_residual:.2e}"
    ));
}

#[test]
fn criterion_4_one_to_one_mapping() {
    let mut specs_checked = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 11); // widths 2..=12
        let spec = ScramblerSpec::random(n, seed).unwrap();
        // independent count: evaluate the flags of every key directly
        for ell in 0..=n {
            let mask = (1u64 << ell) - 1;
            let count = (0..1u64 << n)
                .filter(|&x| spec.flags(x).bits() & mask == mask)
                .count();
            assert_eq!(count, 1 << (n - ell), "seed {seed} n {n} ell {ell}");
        }
        specs_checked += 1;
    }
    pass(&format!(
        "criterion 4: one-to-one mapping, {specs_checked} random instances, all stage sizes exactly 2^(n-ell)"
    ));
}

#[test]
fn criterion_5_headline_fourteen_bits() {
    let seed = 7u64;
    let spec = ScramblerSpec::random(14, seed).unwrap();
    let mut hits = 0;
    for rep in 0..20u64 {
        let result = run_search(&spec, 1000, search_rng(seed, rep)).unwrap();
        if result.total_circuit_queries == 14 && result.verified {
            hits += 1;
        }
    }
    assert!(
        hits >= 18,
        "only {hits}/20 repetitions hit 14 queries verified"
    );

    let baseline = run_baseline(&spec).unwrap();
    assert_eq!(baseline.total_circuit_queries, 101);
    assert_eq!(smallest_iteration_count((2.0f64).powi(-14)), 101);
    assert!((baseline.success_prob - 1.0).abs() < 1e-9);
    assert_eq!(baseline_query_estimate(14), 128.0);
    pass(&format!(
        "criterion 5: n=14 headline, {hits}/20 repetitions at 14 verified queries; baseline g=101 (sqrt(N/M) estimate 128)"
    ));
}

#[test]
fn criterion_6_shot_sweep_trend() {
    // mirrors the CLI sweep stream layout: stream = shots_index * 4096 + rep
    let seed = 3u64;
    let spec = ScramblerSpec::random(8, seed).unwrap();
    let shots_grid = [200u64, 400, 600, 800, 1000];
    let reps = 20u64;

    let mut at_least_090 = Vec::new();
    let mut above_099 = Vec::new();
    for (si, &shots) in shots_grid.iter().enumerate() {
        let mut c090 = 0u64;
        let mut c099 = 0u64;
        for rep in 0..reps {
            let rng = search_rng(seed, si as u64 * 4096 + rep);
            let result = run_search(&spec, shots, rng).unwrap();
            if result.success_prob >= 0.90 {
                c090 += 1;
            }
            if result.success_prob > 0.99 {
                c099 += 1;
            }
        }
        at_least_090.push(c090);
        above_099.push(c099);
    }

    assert!(
        at_least_090[0] >= 15,
        "shots=200: only {}/20 runs reached 0.90",
        at_least_090[0]
    );
    for (i, &shots) in shots_grid.iter().enumerate() {
        if shots >= 800 {
            assert!(
                at_least_090[i] >= 18,
                "shots={shots}: only {}/20 runs reached 0.90",
                at_least_090[i]
            );
        }
    }
    let inversions = above_099.windows(2).filter(|w| w[1] < w[0]).count();
    assert!(
        inversions <= 1,
        "top-band counts {above_099:?} have {inversions} inversions"
    );
    pass(&format!(
        "criterion 6: shot sweep trend, >=0.90 counts {at_least_090:?}, >0.99 counts {above_099:?} ({inversions} inversion)"
    ));
}

#[test]
fn criterion_7_model_round_trip() {
    // entropy of the uniform model is n exactly
    assert_eq!(ModelledState::uniform(8).entropy(), 8.0);

    // ideal stage models estimate the next weight as exactly one half
    let spec = ScramblerSpec::random(8, 900).unwrap();
    for ell in 1..=8usize {
        let model = posearch_core::exact_stage_model(&spec, ell - 1).unwrap();
        assert_eq!(model.entropy(), (8 - (ell - 1)) as f64);
        assert_eq!(model.estimate_lambda(ell).unwrap(), 0.5);
    }

    // sampling round trip: 20 random models, 1e5 shots, every per-bit
    // frequency within 5 sigma of its probability
    let shots = 100_000u64;
    let mut worst_z = 0.0f64;
    let mut rng = sub_rng(901, 1);
    for m in 0..20u64 {
        let probs: Vec<f64> = (0..8).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect();
        let model = ModelledState::from_probs(probs.clone()).unwrap();
        let sv = model.prepare().unwrap();
        let counts = sv.sample_bits(shots, &mut sub_rng(902, m)).unwrap();
        let estimated = ModelledState::estimate_from_counts(&counts.one_counts, shots).unwrap();
        for (j, (&p, &p_hat)) in probs.iter().zip(estimated.probs()).enumerate() {
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            let z = (p_hat - p).abs() / sigma;
            assert!(z < 5.0, "model {m} bit {} off by {z:.2} sigma", j + 1);
            worst_z = worst_z.max(z);
        }
    }
    pass(&format!(
        "criterion 7: model round trip, 20 models x 8 bits within 5 sigma (worst {worst_z:.2}); exact entropy and weight identities hold"
    ));
}

#[test]
fn criterion_8_reproducibility() {
    let bin = env!("CARGO_BIN_EXE_posearch");
    let dir = std::env::temp_dir().join(format!("posearch-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // identical run invocations produce byte-identical JSON
    let run_out = |name: &str| dir.join(name);
    for name in ["a.json", "b.json"] {
        let status = Command::new(bin)
            .args(["run", "--n", "8", "--shots", "300", "--seed", "9", "--out"])
            .arg(run_out(name))
            .output()
            .unwrap();
        assert!(status.status.success());
    }
    let a = std::fs::read(run_out("a.json")).unwrap();
    let b = std::fs::read(run_out("b.json")).unwrap();
    assert!(!a.is_empty() && a == b, "run reports differ");

    // serial and concurrent sweeps produce identical CSV
    for (name, threads) in [("serial.csv", "1"), ("parallel.csv", "4")] {
        let status = Command::new(bin)
            .args([
                "sweep",
                "--n",
                "8",
                "--shots",
                "200,400",
                "--reps",
                "8",
                "--seed",
                "9",
                "--threads",
                threads,
                "--out",
            ])
            .arg(run_out(name))
            .output()
            .unwrap();
        assert!(status.status.success());
    }
    let serial = std::fs::read(run_out("serial.csv")).unwrap();
    let parallel = std::fs::read(run_out("parallel.csv")).unwrap();
    assert!(
        !serial.is_empty() && serial == parallel,
        "sweep outputs differ"
    );

    std::fs::remove_dir_all(&dir).ok();
    pass("criterion 8: byte-identical JSON reports and thread-count-independent sweep CSV");
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = sub_rng(seed, 88);
    let mut amps: Vec<Complex64> = (0..1u64 << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}
