//! Seeded generators. Every randomized operation takes one of these
//! explicitly; nothing reads global entropy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for chains, code sampling and ISD trials.
pub type ChainRng = ChaCha8Rng;

/// Algorithm identifier recorded next to every experiment output.
pub const PRNG_ID: &str = "chacha8-rand_chacha-0.3";

pub fn seeded(seed: u64) -> ChainRng {
    ChainRng::seed_from_u64(seed)
}

/// Derives the seed of an independent sub-stream (trial, chain, prefix)
/// from a base seed with a SplitMix64 finalizer.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
