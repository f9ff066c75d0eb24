//! Seed derivation for reproducible, order-independent replication streams.
//!
//! Every replication draws from its own ChaCha8 generator whose seed is a
//! SplitMix64 hash of `(base seed, replication index)`. The derived seed is
//! reported alongside each replication so a single row can be re-run alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output step.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under base seed `seed`.
#[inline]
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(GOLDEN_GAMMA).rotate_left(17))
}

/// Generator seeded directly from a (possibly derived) seed.
pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `index` under base seed `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    rng_from_seed(stream_seed(seed, index))
}
