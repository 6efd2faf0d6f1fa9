//! Counter-based random streams.
//!
//! Every random draw is taken from a ChaCha stream addressed by
//! `(seed, stream)`. Streams are keyed on stable identifiers (topic index,
//! row index, K) so results do not depend on evaluation order or threads.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

/// Generator for one `(seed, stream)` address.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the fit at topic count `k` in a sweep started from `base`.
pub fn derive_seed(base: u64, k: usize) -> u64 {
    mix64(base ^ mix64(k as u64))
}

/// Stable 64-bit key for a string identifier (FNV-1a).
pub fn key_for_id(id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
