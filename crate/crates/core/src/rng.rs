//! The single seeded generator used for every sampled computation.
//!
//! All randomness in the toolkit flows from [`seeded`], a ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng`) keyed by a `u64` seed. Identical seeds give
//! identical streams on every platform.

use rand::SeedableRng;

pub type SeededRng = rand_chacha::ChaCha8Rng;

pub const GENERATOR_NAME: &str = "ChaCha8Rng";

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}
