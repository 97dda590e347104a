//! Seeded random streams.
//!
//! Every replicate `i` of an experiment with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. Streams are
//! independent and the mapping does not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replicate_stream(master_seed: u64, replicate: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}
