//! Named, seedable RNG substreams.
//!
//! Every source of randomness in the crate (noise synthesis, training
//! masks, validation parity picks, random fills, weight init) draws from
//! its own substream of one master seed, so components are reproducible
//! independently of each other. A substream is identified by a label and
//! an index; the ChaCha key is a SHA-256 digest of the three parts, which
//! keeps streams decorrelated without any coordination.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Deterministic RNG for `(seed, label, index)`.
pub fn substream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Derives a child 64-bit seed, for handing a whole component its own seed.
pub fn subseed(seed: u64, label: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}
