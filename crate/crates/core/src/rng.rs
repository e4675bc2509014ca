//! Reproducible random streams.
//!
//! Every path draws from ChaCha8 streams keyed by `(master_seed, path, leg)`,
//! so the numbers a path sees do not depend on which worker simulates it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent randomness consumers within one simulated order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Leg {
    Rate = 0,
    Mid = 1,
    OrderSize = 2,
}

const LEGS: u64 = 4;

/// Stream for one leg of one path.
pub fn stream(master_seed: u64, path_index: u64, leg: Leg) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index.wrapping_mul(LEGS).wrapping_add(leg as u64));
    rng
}
