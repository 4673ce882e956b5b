//! Deterministic sampling for budgeted brute-force phases.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pick at most `budget` items from `items`, deterministically for a seed.
/// When the budget covers everything the full slice is returned in order.
pub fn sample_indices(n: usize, budget: usize, seed: u64) -> Vec<usize> {
    if n <= budget {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    idx.truncate(budget);
    idx.sort_unstable();
    idx
}
