//! Seeded random number generation shared by every stochastic component.
//!
//! All randomness flows through [`SimRng`], ChaCha with 8 rounds
//! (`rand_chacha::ChaCha8Rng`). Its output stream is fully specified and
//! independent of platform and word size, so a seed reproduces the same
//! workload, fleet and optimizer trajectory everywhere.
//!
//! Different consumers of one seed draw from disjoint ChaCha streams
//! (see [`Stream`]) so that, for instance, changing the workload size does
//! not perturb the optimizer's random sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// ChaCha stream identifiers used for a single experiment seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Default = 0,
    Workload = 1,
    Fleet = 2,
    Optimizer = 3,
}

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn seeded_stream(seed: u64, stream: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
