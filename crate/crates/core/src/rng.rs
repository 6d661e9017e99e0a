//! Reproducible random streams: one ChaCha8 key per base seed, one stream per index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A `(base_seed, stream_index)` pair naming an independent ChaCha8 stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub base_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(base_seed: u64, stream_index: u64) -> Self {
        Self {
            base_seed,
            stream_index,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A child stream keyed by `(self, key)`; children with distinct keys are distinct streams.
    pub fn derive(&self, key: u64) -> Self {
        let mixed = splitmix64(self.stream_index ^ splitmix64(key.wrapping_add(0x632b_e59b_d9b4_e019)));
        Self {
            base_seed: self.base_seed,
            stream_index: mixed,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
