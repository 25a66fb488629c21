//! Seeded randomness.
//!
//! Every random choice in the crate comes from [`TrialRng`], a ChaCha8
//! generator. A batch run derives trial `t` from the run seed by selecting
//! ChaCha stream `t`, so a failing trial can be replayed on its own and the
//! results do not depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `index` of the run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
