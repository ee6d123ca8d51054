//! Counter-indexed random streams.
//!
//! Every `(layer, index)` pair gets its own ChaCha8 stream derived from the
//! master seed, so Monte Carlo results depend only on the seed and the trial
//! counts, never on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every sampler in the crate.
pub type SimRng = ChaCha8Rng;

const INDEX_BITS: u32 = 56;
const INDEX_MASK: u64 = (1 << INDEX_BITS) - 1;

/// Independent stream for realization `index` of layer `layer`.
pub fn stream_rng(seed: u64, layer: u8, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((layer as u64) << INDEX_BITS) | (index & INDEX_MASK));
    rng
}
