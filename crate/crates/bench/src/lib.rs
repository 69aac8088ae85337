//! Shared fixtures for the criterion benchmarks.

use posearch_core::{ModelledState, ScramblerSpec, StateVector};

pub fn spec(n: usize) -> ScramblerSpec {
    ScramblerSpec::random(n, 0xbe9c).expect("valid instance")
}

pub fn uniform_state(n: usize) -> StateVector {
    let mut sv = StateVector::zero(n).expect("within capacity");
    sv.apply_walsh_hadamard().expect("unitary");
    sv
}

pub fn skewed_model(n: usize) -> ModelledState {
    let probs = (0..n).map(|j| 0.1 + 0.8 * (j as f64 / n as f64)).collect();
    ModelledState::from_probs(probs).expect("valid probabilities")
}
