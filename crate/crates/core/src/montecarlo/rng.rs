//! Deterministic random streams.
//!
//! Replication `r` of a cell seeded with `seed` draws from the ChaCha8 stream
//! with key `seed` (little-endian in the first eight key bytes, the rest
//! zero) and stream id `r`. Distinct `(seed, r)` pairs give distinct streams,
//! and a replication's draws do not depend on which thread runs it or in
//! which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::Algorithm;

pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replication);
    rng
}

// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `(algorithm, horizon)` cell of a sweep started from `base_seed`.
pub fn cell_seed(base_seed: u64, algorithm: Algorithm, horizon: u64) -> u64 {
    let mut h = mix(base_seed ^ 0x9E37_79B9_7F4A_7C15);
    h = mix(h ^ algorithm.code().wrapping_mul(0xD6E8_FEB8_6659_FD93));
    mix(h ^ horizon)
}
