//! Stable sub-seed derivation.
//!
//! A sub-seed is `base + fnv1a64(tag bytes, then each part as little-endian u64)`
//! with wrapping addition. The hash is fixed (no `std` hasher) so a single
//! sweep cell or mission epoch can be replayed from its coordinates alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(FNV_OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// `base + fnv1a64(tag ‖ parts)`.
pub fn derive_seed(base: u64, tag: &str, parts: &[u64]) -> u64 {
    let bytes = tag
        .bytes()
        .chain(parts.iter().flat_map(|p| p.to_le_bytes()));
    base.wrapping_add(fnv1a64(bytes))
}

/// The generator used everywhere in the crate. ChaCha8 output is stable
/// across platforms and crate releases.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
