//! End-to-end driver behaviour that crosses module boundaries: determinism
//! with exact models, statistical success, and parallel reproducibility.

use posearch_core::{
    run_search, run_search_with, search_rng, ScramblerSpec, SearchOptions, SearchRun,
};
use rayon::prelude::*;

#[test]
fn exact_model_pipeline_is_deterministic_up_to_ten_bits() {
    for n in [4usize, 6, 8, 10] {
        let spec = ScramblerSpec::random(n, 77).unwrap();
        let opts = SearchOptions {
            shots: 20,
            bits_per_stage: 1,
            exact_models: true,
        };
        let result = run_search_with(&spec, opts, search_rng(77, 0)).unwrap();
        assert!(result.verified, "n = {n}");
        assert!(
            (result.success_prob - 1.0).abs() < 1e-9,
            "n = {n}: p = {}",
            result.success_prob
        );
        assert_eq!(result.total_circuit_queries, n as u64);
        for stage in &result.stages {
            assert!(stage.exact_target_prob >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn statistical_runs_mostly_verify() {
    let spec = ScramblerSpec::random(8, 5).unwrap();
    let verified = (0..10u64)
        .filter(|&rep| {
            run_search(&spec, 1000, search_rng(5, rep))
                .unwrap()
                .verified
        })
        .count();
    assert!(verified >= 8, "only {verified}/10 runs verified");
}

#[test]
fn stage_stepping_matches_execute() {
    let spec = ScramblerSpec::random(6, 9).unwrap();
    let opts = SearchOptions {
        shots: 300,
        ..SearchOptions::default()
    };
    let full = run_search_with(&spec, opts, search_rng(9, 2)).unwrap();

    let mut run = SearchRun::new(&spec, opts, search_rng(9, 2)).unwrap();
    for ell in 1..=4 {
        run.stage_step(ell).unwrap();
    }
    let resumed = run.execute().unwrap();
    assert_eq!(full, resumed);
}

#[test]
fn parallel_and_serial_repetitions_agree() {
    let spec = ScramblerSpec::random(8, 13).unwrap();
    let serial: Vec<_> = (0..8u64)
        .map(|rep| run_search(&spec, 200, search_rng(13, rep)).unwrap())
        .collect();
    let parallel: Vec<_> = (0..8u64)
        .into_par_iter()
        .map(|rep| run_search(&spec, 200, search_rng(13, rep)).unwrap())
        .collect();
    assert_eq!(serial, parallel);
}
