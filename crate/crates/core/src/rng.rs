//! Hierarchical seed derivation.
//!
//! Every stochastic component draws from its own ChaCha8 stream. A stream is
//! identified by the root seed and a path of `(label, index)` pairs; the child
//! seed is obtained by folding each pair into the parent seed with the
//! SplitMix64 finalizer:
//!
//! ```text
//! child = splitmix64(parent ^ splitmix64(fnv1a(label) ^ index.rotate_left(32)))
//! ```
//!
//! Because the derivation only depends on the path, round `i` of a campaign
//! sees the same random numbers no matter how rounds are scheduled across
//! workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Derives the seed of the child stream `(label, index)` of `parent`.
pub fn derive_seed(parent: u64, label: &str, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(fnv1a(label) ^ index.rotate_left(32)))
}

/// Opens the child stream `(label, index)` of `parent`.
pub fn stream(parent: u64, label: &str, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(parent, label, index))
}

pub fn from_seed(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
