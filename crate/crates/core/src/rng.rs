//! Seed derivation for deterministic multistart runs.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG used throughout the crate. ChaCha output is identical across
/// platforms, which keeps seeded runs byte-reproducible.
pub type Rng = ChaCha8Rng;

/// Builds the RNG for one run of a multistart procedure.
///
/// Run `i` of a procedure seeded with `seed` always draws from
/// `seed + i`, so per-run results do not depend on scheduling.
pub fn run_rng(seed: u64, run_index: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(run_index))
}

/// Mixes a salt into a base seed for derived sub-streams (instances,
/// solver slots) that must not collide with the `seed + run_index` runs.
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
