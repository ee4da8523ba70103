//! Seed derivation. Every stochastic stage draws from its own stream, keyed
//! by `derive(root, stage_name)`, so adding a stage never shifts another's
//! random numbers.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Stage names used by the pipeline.
pub mod stage {
    pub const SYNTH: &str = "synth";
    pub const FOLDS: &str = "folds";
    pub const FIT: &str = "fit";
    pub const BACKGROUND: &str = "background";
}

/// FNV-1a, 64-bit.
pub fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `splitmix64(root ^ fnv1a(stage))`.
pub fn derive(root: u64, stage: &str) -> u64 {
    splitmix64(root ^ fnv1a(stage.bytes()))
}

/// The crate's one RNG type: portable and stable across platforms and releases.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
