//! Outer search loop.
//!
//! A run walks the flag bits in stages. Each stage estimates the target
//! weight from the current modelled state's entropy, derives the schedule,
//! runs the fixed-point inner loop from a freshly prepared |mu>, samples the
//! result, and re-estimates the model for the next stage. After the last
//! stage the reported key is the modal measurement outcome, verified against
//! the full match predicate, alongside the exact probability the final
//! statevector put on the hidden key.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grover::{run_stage, schedule_for};
use crate::model::{ModelRecord, ModelledState};
use crate::oracle::StageOracle;
use crate::qsim::{SampleCounts, StateVector};
use crate::rng::ChaCha8Rng;
use crate::scrambler::ScramblerSpec;

/// Knobs for one search run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Shots sampled after every stage (model estimation and, after the
    /// final stage, the reported key).
    pub shots: u64,
    /// Flag bits consumed per stage: 1 (n stages) or 2 (about n/2 stages;
    /// an odd final stage consumes the remaining single bit).
    pub bits_per_stage: usize,
    /// Test hook: replace every estimated model by the exact intermediate
    /// target state, making the run deterministic.
    pub exact_models: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            shots: 1000,
            bits_per_stage: 1,
            exact_models: false,
        }
    }
}

/// What one stage did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    /// Flag bits constrained after this stage.
    pub ell: usize,
    /// Estimated target weight the schedule was built from.
    pub lambda_hat: f64,
    /// Iterations executed.
    pub g: u32,
    /// Matched phase.
    pub alpha: f64,
    /// Oracle queries consumed by the stage circuit (= g).
    pub circuit_queries: u64,
    /// Entropy of the incoming model.
    pub entropy_before: f64,
    /// Probability mass the stage output put on its target set, read
    /// exactly from the statevector.
    pub exact_target_prob: f64,
    /// Model estimated from this stage's shots (absent for the baseline,
    /// which never samples).
    pub betas_after: Option<ModelRecord>,
}

/// Overall outcome of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Modal measurement outcome of the final stage (ties resolve to the
    /// smallest key).
    pub found_key: u64,
    /// Whether the full match predicate accepts `found_key`.
    pub verified: bool,
    /// Exact probability of the hidden key in the final statevector.
    pub success_prob: f64,
    /// Oracle queries per circuit execution, summed over stages.
    pub total_circuit_queries: u64,
    /// Queries counting every shot's circuit execution.
    pub total_shot_queries: u64,
    pub stages: Vec<StageReport>,
}

/// In-flight state of a staged search. Stages are strictly sequential;
/// independent runs may execute in parallel, each owning its generator.
pub struct SearchRun<'a> {
    spec: &'a ScramblerSpec,
    opts: SearchOptions,
    rng: ChaCha8Rng,
    model: ModelledState,
    stages: Vec<StageReport>,
    last_counts: Option<SampleCounts>,
    last_state: Option<StateVector>,
}

impl<'a> SearchRun<'a> {
    pub fn new(spec: &'a ScramblerSpec, opts: SearchOptions, rng: ChaCha8Rng) -> Result<Self> {
        if opts.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !(opts.bits_per_stage == 1 || opts.bits_per_stage == 2) {
            return Err(Error::BitsPerStage {
                bits: opts.bits_per_stage,
            });
        }
        Ok(Self {
            spec,
            opts,
            rng,
            model: ModelledState::uniform(spec.n()),
            stages: Vec::new(),
            last_counts: None,
            last_state: None,
        })
    }

    /// The model the next stage will start from.
    pub fn model(&self) -> &ModelledState {
        &self.model
    }

    pub fn reports(&self) -> &[StageReport] {
        &self.stages
    }

    /// Executes one stage targeting the first `ell` flags: estimate the
    /// weight, schedule, run the inner loop, sample, re-estimate the model.
    pub fn stage_step(&mut self, ell: usize) -> Result<StageReport> {
        let entropy_before = self.model.entropy();
        let lambda_hat = self.model.estimate_lambda(ell)?;
        let schedule = schedule_for(lambda_hat)?;
        let mut oracle = StageOracle::new(self.spec, ell, schedule.alpha)?;
        let sv = run_stage(&self.model, &mut oracle, &schedule)?;

        let counts = sv.sample_bits(self.opts.shots, &mut self.rng)?;
        let next_model = if self.opts.exact_models {
            exact_stage_model(self.spec, ell)?
        } else {
            ModelledState::estimate_from_counts(&counts.one_counts, self.opts.shots)?
        };

        let mask = self.spec.stage_mask(ell)?;
        let exact_target_prob = sv.probability_mass(|x| self.spec.flags(x).bits() & mask == mask);

        let report = StageReport {
            ell,
            lambda_hat,
            g: schedule.g,
            alpha: schedule.alpha,
            circuit_queries: oracle.queries(),
            entropy_before,
            exact_target_prob,
            betas_after: Some(next_model.record()),
        };
        self.model = next_model;
        self.last_counts = Some(counts);
        self.last_state = Some(sv);
        self.stages.push(report.clone());
        Ok(report)
    }

    /// Runs all remaining stages and assembles the result.
    pub fn execute(mut self) -> Result<SearchResult> {
        let n = self.spec.n();
        let mut ell = self.stages.last().map_or(0, |s| s.ell);
        while ell < n {
            ell = (ell + self.opts.bits_per_stage).min(n);
            self.stage_step(ell)?;
        }
        self.finish()
    }

    fn finish(self) -> Result<SearchResult> {
        let counts = self.last_counts.expect("at least one stage has run");
        let state = self.last_state.expect("at least one stage has run");
        let found_key = counts.modal_outcome().expect("shots >= 1");
        let verified = self.spec.flags(found_key).is_all_ones();
        let success_prob = state.probability_of(self.spec.x_star())?;
        let total_circuit_queries = self.stages.iter().map(|s| s.circuit_queries).sum();
        let total_shot_queries = self
            .stages
            .iter()
            .map(|s| s.circuit_queries * self.opts.shots)
            .sum();
        Ok(SearchResult {
            found_key,
            verified,
            success_prob,
            total_circuit_queries,
            total_shot_queries,
            stages: self.stages,
        })
    }
}

/// Full staged search with default options.
pub fn run_search(spec: &ScramblerSpec, shots: u64, rng: ChaCha8Rng) -> Result<SearchResult> {
    run_search_with(
        spec,
        SearchOptions {
            shots,
            ..SearchOptions::default()
        },
        rng,
    )
}

/// Full staged search with explicit options.
pub fn run_search_with(
    spec: &ScramblerSpec,
    opts: SearchOptions,
    rng: ChaCha8Rng,
) -> Result<SearchResult> {
    SearchRun::new(spec, opts, rng)?.execute()
}

/// Single-stage reference run: the full match oracle over the uniform start,
/// weight `2^-n` known exactly. Deterministic, so the key is read from the
/// final statevector instead of being sampled, and the shot-inclusive query
/// count equals the per-circuit count.
pub fn run_baseline(spec: &ScramblerSpec) -> Result<SearchResult> {
    let n = spec.n();
    let lambda = (-(n as f64)).exp2();
    let schedule = schedule_for(lambda)?;
    let model = ModelledState::uniform(n);
    let mut oracle = StageOracle::new(spec, n, schedule.alpha)?;
    let sv = run_stage(&model, &mut oracle, &schedule)?;

    let mut found_key = 0u64;
    let mut best = f64::NEG_INFINITY;
    for x in 0..1u64 << n {
        let p = sv.probability_of(x)?;
        if p > best {
            best = p;
            found_key = x;
        }
    }
    let verified = spec.flags(found_key).is_all_ones();
    let success_prob = sv.probability_of(spec.x_star())?;
    let queries = oracle.queries();
    Ok(SearchResult {
        found_key,
        verified,
        success_prob,
        total_circuit_queries: queries,
        total_shot_queries: queries,
        stages: vec![StageReport {
            ell: n,
            lambda_hat: lambda,
            g: schedule.g,
            alpha: schedule.alpha,
            circuit_queries: queries,
            entropy_before: model.entropy(),
            exact_target_prob: sv.probability_mass(|x| spec.flags(x).is_all_ones()),
            betas_after: None,
        }],
    })
}

/// Textbook query estimate `sqrt(N / M) = 2^(n/2)` for the single-target
/// search, reported alongside the exact baseline count.
pub fn baseline_query_estimate(n: usize) -> f64 {
    ((n as f64) / 2.0).exp2()
}

/// The exact intermediate target state as a product model: each satisfied
/// flag pins the key bit it reads (through the permutation); the rest stay
/// uniform. Used by the `exact_models` hook and by verification suites.
pub fn exact_stage_model(spec: &ScramblerSpec, ell: usize) -> Result<ModelledState> {
    spec.stage_mask(ell)?;
    let mut probs = vec![0.5; spec.n()];
    for &pos in &spec.perm()[..ell] {
        probs[pos] = ((spec.x_star() >> pos) & 1) as f64;
    }
    ModelledState::from_probs(probs)
}
