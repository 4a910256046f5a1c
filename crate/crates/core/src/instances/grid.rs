use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Edge, Instance, Path, Player};

pub const MAX_GRID_NODES: usize = 100;

/// DFS expansions allowed per random-path attempt.
const SEARCH_BUDGET: usize = 4_000;
const TERMINAL_RETRIES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub players: usize,
    pub strategies_per_player: usize,
    pub seed: u64,
}

struct Grid {
    nodes: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Grid {
    fn new(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push(Edge::new(edges.len(), id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push(Edge::new(edges.len(), id(r, c), id(r + 1, c)));
                }
            }
        }
        let nodes = rows * cols;
        let mut adj = vec![Vec::new(); nodes];
        for e in &edges {
            adj[e.u].push((e.v, e.id));
            adj[e.v].push((e.u, e.id));
        }
        Grid { nodes, edges, adj }
    }

    fn shortest(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                let mut path = Vec::new();
                let mut at = t;
                while let Some((p, e)) = prev[at] {
                    path.push(e);
                    at = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(y, e) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Randomized node-simple DFS from `s` to `t` with at most `max_len` edges.
    fn random_path(&self, s: usize, t: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
        let mut on_path = vec![false; self.nodes];
        on_path[s] = true;
        // stack of (node, shuffled neighbours, next index)
        let mut stack = vec![(s, self.shuffled(s, rng), 0usize)];
        let mut edges: Vec<usize> = Vec::new();
        let mut budget = SEARCH_BUDGET;
        while let Some(top) = stack.last_mut() {
            if top.0 == t {
                return Some(edges);
            }
            if top.2 == top.1.len() || edges.len() >= max_len || budget == 0 {
                if budget == 0 {
                    return None;
                }
                let (x, _, _) = stack.pop().expect("non-empty");
                on_path[x] = false;
                edges.pop();
                continue;
            }
            let (y, e) = top.1[top.2];
            top.2 += 1;
            if on_path[y] {
                continue;
            }
            budget -= 1;
            on_path[y] = true;
            edges.push(e);
            let next = self.shuffled(y, rng);
            stack.push((y, next, 0));
        }
        None
    }

    fn shuffled(&self, x: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
        let mut v = self.adj[x].clone();
        v.shuffle(rng);
        v
    }
}

/// Grid graph with random terminals. Each strategy set holds the BFS
/// shortest path plus up to `strategies_per_player - 1` distinct random
/// simple paths; sets may come out smaller on tiny grids.
pub fn gen_random_grid(spec: &GridSpec) -> Result<Instance> {
    let GridSpec {
        rows,
        cols,
        players,
        strategies_per_player,
        seed,
    } = *spec;
    let nodes = rows * cols;
    if !(2..=MAX_GRID_NODES).contains(&nodes) {
        return Err(Error::Generator(format!(
            "grid must have between 2 and {MAX_GRID_NODES} nodes, got {rows}x{cols}"
        )));
    }
    if players == 0 || strategies_per_player == 0 {
        return Err(Error::Generator("players and strategies must be positive".into()));
    }
    let grid = Grid::new(rows, cols);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(players);
    for _ in 0..players {
        let mut found = None;
        for _ in 0..TERMINAL_RETRIES {
            let s = rng.gen_range(0..nodes);
            let t = rng.gen_range(0..nodes - 1);
            let t = if t >= s { t + 1 } else { t };
            if let Some(p) = grid.shortest(s, t) {
                found = Some((s, t, p));
                break;
            }
        }
        let (s, t, shortest) = found.ok_or_else(|| Error::Generator("no reachable terminal pair".into()))?;
        let max_len = shortest.len() + rows + cols;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([shortest.clone()]);
        let mut strategies = vec![Path::new(shortest)];
        for _ in 0..8 * strategies_per_player {
            if strategies.len() == strategies_per_player {
                break;
            }
            if let Some(p) = grid.random_path(s, t, max_len, &mut rng) {
                if seen.insert(p.clone()) {
                    strategies.push(Path::new(p));
                }
            }
        }
        out.push(Player::new(s, t, strategies));
    }
    Instance::new(grid.nodes, grid.edges, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_instance;
    use num_bigint::BigUint;

    fn spec(rows: usize, cols: usize, players: usize, k: usize, seed: u64) -> GridSpec {
        GridSpec {
            rows,
            cols,
            players,
            strategies_per_player: k,
            seed,
        }
    }

    #[test]
    fn tiny_grid_is_valid() {
        let inst = gen_random_grid(&spec(2, 2, 1, 2, 7)).unwrap();
        assert!(validate_instance(&inst).is_empty());
        assert_eq!(inst.player_count(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_random_grid(&spec(4, 4, 5, 3, 1)).unwrap();
        let b = gen_random_grid(&spec(4, 4, 5, 3, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a.profile_count() <= BigUint::from(243u32));
        assert!(a.players.iter().all(|p| !p.strategies.is_empty() && p.strategies.len() <= 3));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(gen_random_grid(&spec(11, 10, 1, 1, 0)).is_err());
        assert!(gen_random_grid(&spec(1, 1, 1, 1, 0)).is_err());
        assert!(gen_random_grid(&spec(3, 3, 0, 1, 0)).is_err());
    }

    #[test]
    fn strategies_are_distinct() {
        for seed in 0..20 {
            let inst = gen_random_grid(&spec(4, 5, 4, 4, seed)).unwrap();
            assert!(validate_instance(&inst).is_empty());
            for p in &inst.players {
                let set: BTreeSet<_> = p.strategies.iter().map(|s| s.edges().to_vec()).collect();
                assert_eq!(set.len(), p.strategies.len());
            }
        }
    }
}
