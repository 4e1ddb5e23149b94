//! Reproducible random streams.
//!
//! Every sampler draws from ChaCha20 (`rand_chacha::ChaCha20Rng`). The 256-bit
//! key is expanded from the 64-bit `seed` with `SeedableRng::seed_from_u64`
//! (PCG32 expansion) and the 64-bit `stream_id` selects the ChaCha stream
//! (nonce). Both steps are fixed algorithms, so identical `(seed, stream_id)`
//! pairs yield identical sequences on every platform.
//!
//! Sub-streams are derived with [`Seed::derive`], which hashes a component
//! label and a replicate index into a fresh `stream_id`:
//!
//! ```text
//! stream_id' = splitmix64(fnv1a64(component) ^ splitmix64(stream_id) ^ rotl(splitmix64(replicate), 17))
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub seed: u64,
    #[serde(default)]
    pub stream_id: u64,
}

impl Seed {
    pub const fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    pub const fn with_stream(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Derive an independent sub-stream for a named component and replicate.
    pub fn derive(&self, component: &str, replicate: u64) -> Seed {
        let h = fnv1a64(component.as_bytes())
            ^ splitmix64(self.stream_id)
            ^ splitmix64(replicate).rotate_left(17);
        Seed { seed: self.seed, stream_id: splitmix64(h) }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed::new(0)
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::collections::HashSet;

    #[test]
    fn same_seed_same_stream() {
        let s = Seed::with_stream(42, 7);
        let a: Vec<u64> = s.rng().random_iter().take(16).collect();
        let b: Vec<u64> = s.rng().random_iter().take(16).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let a: Vec<u64> = Seed::with_stream(42, 0).rng().random_iter().take(4).collect();
        let b: Vec<u64> = Seed::with_stream(42, 1).rng().random_iter().take(4).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn derived_streams_are_distinct() {
        let base = Seed::new(9);
        let ids: HashSet<u64> = (0..1000).map(|r| base.derive("noise", r).stream_id).collect();
        assert_eq!(ids.len(), 1000);
        assert_ne!(base.derive("noise", 0), base.derive("impulse", 0));
        assert_eq!(base.derive("noise", 3), base.derive("noise", 3));
    }

    #[test]
    fn known_hash_values_are_stable() {
        // Pin the derivation so that stored configs keep reproducing.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }
}
