//! Seed derivation. Every random quantity in the crate flows from a single
//! master seed through named ChaCha streams, so experiments are reproducible
//! whether repetitions run serially or in parallel.

use rand::SeedableRng;

pub use rand_chacha::ChaCha8Rng;

/// Stream carrying the bit permutation of a scrambler instance.
pub const STREAM_PERM: u64 = 1;
/// Stream carrying the plaintext of a scrambler instance.
pub const STREAM_PLAINTEXT: u64 = 2;
/// Stream carrying the hidden key of a scrambler instance.
pub const STREAM_KEY: u64 = 3;
/// Base stream for search repetitions; repetition `r` uses `BASE + r`.
pub const STREAM_SEARCH_BASE: u64 = 1 << 16;

/// A generator on the named sub-stream of `seed`.
pub fn sub_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The generator driving shot sampling for one search repetition.
pub fn search_rng(seed: u64, repetition: u64) -> ChaCha8Rng {
    sub_rng(seed, STREAM_SEARCH_BASE + repetition)
}
