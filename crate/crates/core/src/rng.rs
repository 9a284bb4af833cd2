//! Seeding conventions.
//!
//! Every random choice in the crate comes from a [`ChaCha8Rng`]. ChaCha is
//! specified independently of platform and word size, so a seed reproduces the
//! same stream everywhere. Child seeds are derived with the SplitMix64
//! finalizer so that (run seed, generation, size, game) tuples map to
//! well-separated streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GameRng = ChaCha8Rng;

/// Stream used for dealing.
pub const DEAL_STREAM: u64 = 0;
/// Stream used for in-game decisions of the seated policies.
pub const DECISION_STREAM: u64 = 1;

pub fn rng_for(seed: u64, stream: u64) -> GameRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `parts` into `base`, order-sensitively.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix(base), |acc, &p| splitmix(acc ^ splitmix(p)))
}
