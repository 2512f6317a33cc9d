//! Seeded random streams.
//!
//! Every parallel unit of work (a tree, a Monte Carlo trial, an optimizer
//! start) draws from its own ChaCha stream keyed by `(seed, index)`, so
//! results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for work item `stream` under the run seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
