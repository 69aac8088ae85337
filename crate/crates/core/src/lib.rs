//! Multi-stage quantum key search from partial match oracles, on a dense
//! statevector simulator.
//!
//! Instead of one black-box oracle answering "is `x` the key?", the search
//! scenario exposes one predicate per ciphertext bit. The driver imposes
//! those predicates one stage at a time: each stage runs a fixed-point
//! Grover-Long loop against the conjunction of the flags constrained so far,
//! starting from a compact product-state model of the previous stage's
//! output and re-estimating that model from shot statistics. For the
//! scrambler scenario every stage halves the candidate set, so an n-bit key
//! falls after about n oracle queries instead of the ~2^(n/2) a single
//! full-match oracle needs.
//!
//! Modules:
//! - [`qsim`]: dense statevector, the few gates the loop needs, sampling
//! - [`scrambler`]: the permute-and-XOR cipher scenario and its flags
//! - [`oracle`]: stage phase oracles (diagonal fast path + literal circuit)
//! - [`grover`]: schedules, the fixed-point iterate, a 2x2 analytic model
//! - [`model`]: bitwise modelled states, entropy, weight estimation
//! - [`driver`]: the staged outer loop and the single-stage baseline
//! - [`rng`]: named seed streams for reproducible experiments

pub mod driver;
pub mod error;
pub mod grover;
pub mod model;
pub mod oracle;
pub mod qsim;
pub mod rng;
pub mod scrambler;

pub use driver::{
    baseline_query_estimate, exact_stage_model, run_baseline, run_search, run_search_with,
    SearchOptions, SearchResult, SearchRun, StageReport,
};
pub use error::{Error, Result};
pub use grover::{analytic_2d, grover_iterate, run_stage, schedule_for, StageSchedule};
pub use model::{binary_entropy, ModelRecord, ModelledState};
pub use oracle::{embed_x_register, reduced_x_register, StageOracle};
pub use qsim::{SampleCounts, StateVector, BIT_CONVENTION_NOTE};
pub use rng::{search_rng, sub_rng, ChaCha8Rng};
pub use scrambler::{FlagState, ScramblerRecord, ScramblerSpec};
