//! Seed expansion.
//!
//! Every random choice derives from one top-level 64-bit seed:
//!
//! * worker `w` of a sampler draws from [`stream(seed, w)`](stream), the
//!   ChaCha8 generator keyed by `seed` on stream id `w`;
//! * trial `t` of a repeated experiment uses [`child_seed(seed, t)`](child_seed)
//!   as its own top-level seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child experiment.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}
