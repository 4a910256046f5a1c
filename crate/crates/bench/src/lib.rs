//! Shared inputs for the benchmarks.

use routegames::instances::{gen_bucket_tight, gen_random_grid, gen_ring, GridSpec};
use routegames::Instance;

pub fn ring(n: usize) -> Instance {
    gen_ring(n).expect("valid ring size")
}

pub fn bucket_tight(a: usize) -> Instance {
    gen_bucket_tight(a).expect("valid path length")
}

/// 5x5 grid, 6 players with up to 4 strategies each.
pub fn grid(seed: u64) -> Instance {
    gen_random_grid(&GridSpec {
        rows: 5,
        cols: 5,
        players: 6,
        strategies_per_player: 4,
        seed,
    })
    .expect("grid fits")
}
