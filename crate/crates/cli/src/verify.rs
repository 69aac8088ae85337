//! Built-in verification suites for small registers: the diagonal oracle
//! against the literal joint-register circuit, the fixed-point property of
//! the schedule on both the analytic model and the statevector, and the
//! scrambler's one-to-one combinatorics. Everything is seeded, so repeated
//! invocations print identical deviations.

use anyhow::Result;
use num_complex::Complex64;
use posearch_core::qsim::StateVector;
use posearch_core::{
    analytic_2d, embed_x_register, grover_iterate, reduced_x_register, schedule_for, sub_rng,
    ModelledState, ScramblerSpec, StageOracle,
};
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run_all(max_n: usize) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        oracle_equivalence(max_n)?,
        grover_long_determinism()?,
        scrambler_bijection()?,
    ])
}

fn random_state(n: usize, seed: u64) -> Result<StateVector> {
    let mut rng = sub_rng(seed, 66);
    let mut amps: Vec<Complex64> = (0..1u64 << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

fn uniform_state(n: usize) -> Result<StateVector> {
    let mut sv = StateVector::zero(n)?;
    sv.apply_walsh_hadamard()?;
    Ok(sv)
}

/// Diagonal fast path vs the full 2n+1 qubit circuit, for every stage and
/// both reference phases, on a uniform and a random input state.
fn oracle_equivalence(max_n: usize) -> Result<CheckOutcome> {
    let mut max_dev = 0.0f64;
    let mut max_residual = 0.0f64;
    for n in 2..=max_n {
        let spec = ScramblerSpec::random(n, 1000 + n as u64)?;
        for ell in 0..=n {
            for alpha in [FRAC_PI_2, PI] {
                for x_state in [uniform_state(n)?, random_state(n, (7 * n + ell) as u64)?] {
                    let mut diag = x_state.clone();
                    StageOracle::new(&spec, ell, alpha)?.apply(&mut diag)?;

                    let mut joint = embed_x_register(&x_state)?;
                    StageOracle::new(&spec, ell, alpha)?.apply_full_circuit(&mut joint)?;
                    let (block, residual) = reduced_x_register(&joint, n)?;
                    max_residual = max_residual.max(residual);
                    for x in 0..1u64 << n {
                        let dev = (block[x as usize] - diag.amplitude(x)?).norm();
                        max_dev = max_dev.max(dev);
                    }
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "oracle_equivalence",
        passed: max_dev < 1e-9 && max_residual < 1e-12,
        detail: format!(
            "n=2..={max_n} all stages alpha={{pi/2,pi}} max_amp_dev={max_dev:.3e} max_leaked_mass={max_residual:.3e}"
        ),
    })
}

/// For a grid of target weights, the derived (g, alpha) must drive the
/// target probability to 1, both in the 2x2 recurrence and on a 10-qubit
/// statevector whose first bit carries the weight.
fn grover_long_determinism() -> Result<CheckOutcome> {
    let n = 10;
    let spec = ScramblerSpec::from_parts(n, (0..n).collect(), 0, (1 << n) - 1)?;
    let mut max_gap = 0.0f64;
    for lambda in [0.5, 0.25, 0.1, 0.01, (2.0f64).powi(-14)] {
        let schedule = schedule_for(lambda)?;
        let (_, on) = analytic_2d(lambda, schedule.alpha, schedule.g)?;
        max_gap = max_gap.max((on.norm_sqr() - 1.0).abs());

        let mut probs = vec![0.5; n];
        probs[0] = lambda;
        let model = ModelledState::from_probs(probs)?;
        let mut oracle = StageOracle::new(&spec, 1, schedule.alpha)?;
        let mut sv = model.prepare()?;
        for _ in 0..schedule.g {
            grover_iterate(&mut sv, &mut oracle, &model, schedule.alpha)?;
        }
        let mass = sv.probability_mass(|x| x & 1 == 1);
        max_gap = max_gap.max((mass - 1.0).abs());
    }
    Ok(CheckOutcome {
        name: "grover_long_determinism",
        passed: max_gap < 1e-9,
        detail: format!("lambda grid of 5, analytic + statevector, max |1-p| = {max_gap:.3e}"),
    })
}

/// Exhaustive stage-size check: every constrained flag halves the candidate
/// set, for a spread of widths and seeds.
fn scrambler_bijection() -> Result<CheckOutcome> {
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for n in 2..=10 {
        for seed in 0..3u64 {
            let spec = ScramblerSpec::random(n, seed)?;
            for ell in 0..=n {
                checked += 1;
                if spec.enumerate_target_set(ell)?.len() != 1 << (n - ell) {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "scrambler_bijection",
        passed: mismatches == 0,
        detail: format!(
            "n=2..=10 x 3 seeds, {checked} stage sizes checked, {mismatches} mismatches"
        ),
    })
}
