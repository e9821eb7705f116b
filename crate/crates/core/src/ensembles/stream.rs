use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic source of per-trial generators.
///
/// Trial `k` reads stream `k` of a ChaCha8 generator keyed by the seed, so
/// results do not depend on how trials are scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededStream {
    seed: u64,
}

impl SeededStream {
    pub const DEFAULT_SEED: u64 = 20_190_722;

    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Generator for one-off draws outside an experiment.
    pub fn rng(&self) -> ChaCha8Rng {
        self.trial(u64::MAX)
    }
}

impl Default for SeededStream {
    fn default() -> Self {
        Self::new(Self::DEFAULT_SEED)
    }
}
