//! Seeded, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a hash of the master seed and
//! a purpose tag, with the trial (or block) index selecting the ChaCha stream
//! id. Two calls with the same `(master, purpose, index)` always produce the
//! same sequence, regardless of which thread asks or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed {
    pub master: u64,
}

impl Seed {
    pub const fn new(master: u64) -> Self {
        Seed { master }
    }

    pub fn stream(&self, purpose: &str, index: u64) -> StreamRng {
        let mut hasher = Sha256::new();
        hasher.update(b"idcap/seed/v1");
        hasher.update(self.master.to_le_bytes());
        hasher.update((purpose.len() as u64).to_le_bytes());
        hasher.update(purpose.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }

    /// Derives a child seed, for handing a sub-computation its own namespace.
    pub fn derive(&self, purpose: &str, index: u64) -> Seed {
        use rand::RngCore;
        Seed::new(self.stream(purpose, index).next_u64())
    }
}

impl From<u64> for Seed {
    fn from(master: u64) -> Self {
        Seed::new(master)
    }
}
