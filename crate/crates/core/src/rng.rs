//! Seeded random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by
//! `(seed, domain)` and selected by a 64-bit stream index, so the draws for
//! sample `k` never depend on how many other samples were processed before it
//! or on which thread processed them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Independent namespaces for the different consumers of randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Dataset = 1,
    Eval = 2,
    Decode = 3,
    Init = 4,
    Shuffle = 5,
    Train = 6,
    Validation = 7,
    Grid = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The generator for substream `index` of `(seed, domain)`.
pub fn stream(seed: u64, domain: Domain, index: u64) -> SimRng {
    let mut key = [0u8; 32];
    let words = [
        splitmix64(seed),
        splitmix64(seed ^ 0xd1b5_4a32_d192_ed03),
        splitmix64(domain as u64),
        splitmix64((domain as u64) << 32 ^ seed.rotate_left(17)),
    ];
    for (chunk, w) in key.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Derives a child seed, used when one seeded job spawns seeded sub-jobs.
pub fn derive_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ (domain as u64).rotate_left(48)) ^ index)
}
