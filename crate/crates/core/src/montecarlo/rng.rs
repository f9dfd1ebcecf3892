//! Counter-addressed random substreams.
//!
//! Every trial owns a fixed slot in a ChaCha8 keystream: trial `t` reads the
//! 64-bit word at position `2t` of its substream. Any trial can be replayed
//! without generating the ones before it, so results do not depend on how
//! trials are split across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Substream ids. Channel draws and covert coin flips never share words.
pub const CHANNEL_STREAM: u64 = 0;
pub const COIN_STREAM: u64 = 1;
pub const SOURCE_CHANNEL_STREAM: u64 = 2;

/// Sequential reader over one substream starting at a given trial.
pub struct TrialStream {
    rng: ChaCha8Rng,
}

impl TrialStream {
    pub fn new(seed: u64, stream: u64, first_trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(u128::from(first_trial) * 2);
        Self { rng }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-mean exponential by inversion, the squared magnitude of a
    /// unit-variance Rayleigh channel.
    pub fn next_exponential(&mut self) -> f64 {
        -(-self.next_uniform()).ln_1p()
    }
}
