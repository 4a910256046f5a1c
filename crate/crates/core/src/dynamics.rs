//! Best-response dynamics with the routing-vector potential.
//!
//! For the max and sum-bucket models every improving move strictly lowers
//! the routing vector in reverse-lexicographic order, so runs terminate. Sum
//! games have no such potential and may cycle; cycle detection catches that.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{Cost, CostModel, RoutingState};
use crate::error::{Error, Result};
use crate::game::{Instance, Routing};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Potential `M(p) = [m_1, ..., m_r]`; `entries[j - 1]` holds `m_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoutingVector {
    entries: Vec<u64>,
}

impl RoutingVector {
    pub fn from_entries(entries: Vec<u64>) -> Self {
        RoutingVector { entries }
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    /// `m_j`, 1-based. Zero past `r`.
    pub fn m(&self, j: usize) -> u64 {
        j.checked_sub(1)
            .and_then(|k| self.entries.get(k))
            .copied()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Highest index with a non-zero entry.
    pub fn top(&self) -> Option<usize> {
        self.entries.iter().rposition(|&m| m != 0).map(|k| k + 1)
    }
}

/// Vector length `r` used for `model`.
pub fn vector_len(model: CostModel, inst: &Instance) -> Result<usize> {
    let stats = inst.stats();
    match model {
        CostModel::Max => Ok(stats.players.max(stats.max_path_len)),
        CostModel::SumBucket => Ok((stats.players + 2 * stats.max_path_len).saturating_sub(1)),
        CostModel::Sum => Err(Error::NoPotential),
    }
}

pub(crate) fn vector_of(model: CostModel, st: &RoutingState<'_>, r: usize) -> RoutingVector {
    let mut entries = vec![0u64; r];
    let mut bump = |value: Cost| {
        // values are >= 1 and <= r by construction
        entries[value as usize - 1] += 1;
    };
    let n = st.instance().player_count();
    match model {
        CostModel::Max => {
            for i in 0..n {
                bump(st.congestion(i));
                bump(st.length(i));
            }
        }
        CostModel::SumBucket => {
            for i in 0..n {
                bump(st.player_cost(CostModel::SumBucket, i));
            }
        }
        CostModel::Sum => unreachable!("sum model has no vector"),
    }
    RoutingVector { entries }
}

/// `M(p)` for the max or sum-bucket model.
pub fn routing_vector(model: CostModel, inst: &Instance, routing: &Routing) -> Result<RoutingVector> {
    let r = vector_len(model, inst)?;
    let st = RoutingState::new(inst, routing.clone())?;
    Ok(vector_of(model, &st, r))
}

/// Reverse-lexicographic comparison: the highest differing index decides.
pub fn compare_routings(a: &RoutingVector, b: &RoutingVector) -> Result<Ordering> {
    if a.r() != b.r() {
        return Err(Error::VectorLengthMismatch(a.r(), b.r()));
    }
    Ok(cmp_vectors(a, b))
}

fn cmp_vectors(a: &RoutingVector, b: &RoutingVector) -> Ordering {
    a.entries.iter().rev().cmp(b.entries.iter().rev())
}

/// Strategies that strictly lower `player`'s cost, with the new cost,
/// sorted by cost then strategy index.
pub fn improving_moves(
    model: CostModel,
    inst: &Instance,
    routing: &Routing,
    player: usize,
) -> Result<Vec<(usize, Cost)>> {
    inst.check_player(player)?;
    let st = RoutingState::new(inst, routing.clone())?;
    Ok(improving_in(model, &st, player))
}

pub(crate) fn improving_in(model: CostModel, st: &RoutingState<'_>, player: usize) -> Vec<(usize, Cost)> {
    let current = st.routing().choices()[player];
    let cost = st.player_cost(model, player);
    let count = st.instance().players[player].strategies.len();
    let mut moves: Vec<(usize, Cost)> = (0..count)
        .filter(|&s| s != current)
        .map(|s| (s, st.deviation_cost(model, player, s)))
        .filter(|&(_, c)| c < cost)
        .collect();
    moves.sort_by_key(|&(s, c)| (c, s));
    moves
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlayerOrder {
    /// Scan players cyclically, starting after the last mover.
    #[default]
    RoundRobin,
    /// Always the lowest-index player with an improving move.
    LowestIndexFirst,
    /// Uniformly random among players with an improving move.
    RandomSeeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathChoice {
    /// Lowest strategy index among improving strategies.
    FirstImprovement,
    /// Lowest resulting cost, ties to the lowest index.
    #[default]
    BestImprovement,
    /// Uniformly random improving strategy.
    RandomImprovement,
}

/// Who moves and where to. Randomized variants draw from the run's seed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MovePolicy {
    pub player_order: PlayerOrder,
    pub path_choice: PathChoice,
}

impl MovePolicy {
    pub fn new(player_order: PlayerOrder, path_choice: PathChoice) -> Self {
        MovePolicy {
            player_order,
            path_choice,
        }
    }

    pub fn is_randomized(&self) -> bool {
        self.player_order == PlayerOrder::RandomSeeded
            || self.path_choice == PathChoice::RandomImprovement
    }
}

impl fmt::Display for PlayerOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerOrder::RoundRobin => "round-robin",
            PlayerOrder::LowestIndexFirst => "lowest-index",
            PlayerOrder::RandomSeeded => "random",
        })
    }
}

impl FromStr for PlayerOrder {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "round-robin" => Ok(PlayerOrder::RoundRobin),
            "lowest-index" | "lowest-index-first" => Ok(PlayerOrder::LowestIndexFirst),
            "random" | "random-seeded" => Ok(PlayerOrder::RandomSeeded),
            _ => Err(format!("unknown player order `{s}` (round-robin, lowest-index, random)")),
        }
    }
}

impl fmt::Display for PathChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathChoice::FirstImprovement => "first",
            PathChoice::BestImprovement => "best",
            PathChoice::RandomImprovement => "random",
        })
    }
}

impl FromStr for PathChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "first" | "first-improvement" => Ok(PathChoice::FirstImprovement),
            "best" | "best-improvement" => Ok(PathChoice::BestImprovement),
            "random" | "random-improvement" => Ok(PathChoice::RandomImprovement),
            _ => Err(format!("unknown path choice `{s}` (first, best, random)")),
        }
    }
}

/// Scheduler state carried between steps.
#[derive(Clone, Debug)]
pub struct StepState {
    cursor: usize,
    steps: usize,
    rng: ChaCha8Rng,
}

impl StepState {
    pub fn new(seed: u64) -> Self {
        StepState {
            cursor: 0,
            steps: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub player: usize,
    pub old_strategy: usize,
    pub new_strategy: usize,
    pub old_cost: Cost,
    pub new_cost: Cost,
    pub sc_before: Cost,
    pub sc_after: Cost,
    /// Potential before/after; absent for the sum model.
    pub vector_before: Option<RoutingVector>,
    pub vector_after: Option<RoutingVector>,
}

fn choose_move(
    model: CostModel,
    st: &RoutingState<'_>,
    policy: &MovePolicy,
    state: &mut StepState,
) -> Option<(usize, usize, Cost)> {
    let n = st.instance().player_count();
    let (player, moves) = match policy.player_order {
        PlayerOrder::RoundRobin => (0..n)
            .map(|k| (state.cursor + k) % n)
            .map(|i| (i, improving_in(model, st, i)))
            .find(|(_, m)| !m.is_empty())?,
        PlayerOrder::LowestIndexFirst => (0..n)
            .map(|i| (i, improving_in(model, st, i)))
            .find(|(_, m)| !m.is_empty())?,
        PlayerOrder::RandomSeeded => {
            let mut candidates: Vec<(usize, Vec<(usize, Cost)>)> = (0..n)
                .map(|i| (i, improving_in(model, st, i)))
                .filter(|(_, m)| !m.is_empty())
                .collect();
            if candidates.is_empty() {
                return None;
            }
            let k = state.rng.gen_range(0..candidates.len());
            candidates.swap_remove(k)
        }
    };
    let (strategy, cost) = match policy.path_choice {
        PathChoice::BestImprovement => moves[0],
        PathChoice::FirstImprovement => *moves.iter().min_by_key(|&&(s, _)| s)?,
        PathChoice::RandomImprovement => *moves.choose(&mut state.rng)?,
    };
    Some((player, strategy, cost))
}

fn step_in_place(
    model: CostModel,
    st: &mut RoutingState<'_>,
    policy: &MovePolicy,
    state: &mut StepState,
    r: Option<usize>,
) -> Option<StepRecord> {
    let (player, strategy, new_cost) = choose_move(model, st, policy, state)?;
    let old_strategy = st.routing().choices()[player];
    let old_cost = st.player_cost(model, player);
    let sc_before = st.social_cost(model);
    let vector_before = r.map(|r| vector_of(model, st, r));
    st.switch(player, strategy);
    let vector_after = r.map(|r| vector_of(model, st, r));
    let record = StepRecord {
        step: state.steps,
        player,
        old_strategy,
        new_strategy: strategy,
        old_cost,
        new_cost,
        sc_before,
        sc_after: st.social_cost(model),
        vector_before,
        vector_after,
    };
    state.steps += 1;
    state.cursor = (player + 1) % st.instance().player_count();
    Some(record)
}

/// Applies one improving move chosen by `policy`; `None` iff the routing is Nash.
pub fn best_response_step(
    model: CostModel,
    inst: &Instance,
    routing: &Routing,
    policy: &MovePolicy,
    state: &mut StepState,
) -> Result<Option<(Routing, StepRecord)>> {
    let mut st = RoutingState::new(inst, routing.clone())?;
    let r = vector_len(model, inst).ok();
    Ok(step_in_place(model, &mut st, policy, state, r).map(|rec| (st.into_routing(), rec)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Converged {
        routing: Routing,
    },
    CycleDetected {
        /// The routing that recurred.
        routing: Routing,
        /// Step count after which it was first seen.
        first_seen: usize,
        cycle_length: usize,
    },
    StepLimitReached {
        routing: Routing,
    },
}

impl Outcome {
    pub fn routing(&self) -> &Routing {
        match self {
            Outcome::Converged { routing }
            | Outcome::CycleDetected { routing, .. }
            | Outcome::StepLimitReached { routing } => routing,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Converged { .. } => "Converged",
            Outcome::CycleDetected { .. } => "Cycle",
            Outcome::StepLimitReached { .. } => "Limit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub model: CostModel,
    pub start: Routing,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
}

impl DynamicsTrace {
    /// Social cost of the final routing.
    pub fn final_social_cost(&self, inst: &Instance) -> Cost {
        RoutingState::new_unchecked(inst, self.outcome.routing().clone()).social_cost(self.model)
    }

    /// One row per step with a fixed header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "step", "player", "old_idx", "new_idx", "old_cost", "new_cost", "sc_before", "sc_after",
        ])?;
        for s in &self.steps {
            w.write_record([
                s.step.to_string(),
                s.player.to_string(),
                s.old_strategy.to_string(),
                s.new_strategy.to_string(),
                s.old_cost.to_string(),
                s.new_cost.to_string(),
                s.sc_before.to_string(),
                s.sc_after.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn routing_hash(r: &Routing) -> u64 {
    let mut h = DefaultHasher::new();
    r.hash(&mut h);
    h.finish()
}

/// Runs best-response dynamics; cycle detection is on for the sum model only.
pub fn run_dynamics(
    model: CostModel,
    inst: &Instance,
    start: &Routing,
    policy: &MovePolicy,
    seed: u64,
    max_steps: usize,
) -> Result<DynamicsTrace> {
    run_dynamics_with(model, inst, start, policy, seed, max_steps, model == CostModel::Sum)
}

/// [`run_dynamics`] with explicit control over cycle detection.
pub fn run_dynamics_with(
    model: CostModel,
    inst: &Instance,
    start: &Routing,
    policy: &MovePolicy,
    seed: u64,
    max_steps: usize,
    detect_cycles: bool,
) -> Result<DynamicsTrace> {
    let mut st = RoutingState::new(inst, start.clone())?;
    let r = vector_len(model, inst).ok();
    let mut state = StepState::new(seed);
    let mut steps: Vec<StepRecord> = Vec::new();
    // hash -> step counts at which a routing with that hash was current
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    if detect_cycles {
        seen.insert(routing_hash(st.routing()), vec![0]);
    }
    let outcome = loop {
        if steps.len() >= max_steps.max(1) {
            let nash = (0..inst.player_count()).all(|i| improving_in(model, &st, i).is_empty());
            let routing = st.routing().clone();
            break if nash {
                Outcome::Converged { routing }
            } else {
                Outcome::StepLimitReached { routing }
            };
        }
        let Some(rec) = step_in_place(model, &mut st, policy, &mut state, r) else {
            break Outcome::Converged {
                routing: st.routing().clone(),
            };
        };
        steps.push(rec);
        if detect_cycles {
            let now = steps.len();
            let h = routing_hash(st.routing());
            let bucket = seen.entry(h).or_default();
            let hit = bucket
                .iter()
                .copied()
                .find(|&k| &replay(start, &steps[..k]) == st.routing());
            if let Some(first_seen) = hit {
                break Outcome::CycleDetected {
                    routing: st.routing().clone(),
                    first_seen,
                    cycle_length: now - first_seen,
                };
            }
            bucket.push(now);
        }
    };
    Ok(DynamicsTrace {
        model,
        start: start.clone(),
        steps,
        outcome,
    })
}

/// Routing reached from `start` after applying `steps`.
pub fn replay(start: &Routing, steps: &[StepRecord]) -> Routing {
    let mut r = start.clone();
    for s in steps {
        r.set(s.player, s.new_strategy);
    }
    r
}

/// Uniformly random start routing.
pub fn random_start(inst: &Instance, seed: u64) -> Routing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Routing::new(
        inst.players
            .iter()
            .map(|p| rng.gen_range(0..p.strategies.len()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Edge, Path, Player};

    fn v(e: &[u64]) -> RoutingVector {
        RoutingVector::from_entries(e.to_vec())
    }

    #[test]
    fn compare_rules() {
        assert_eq!(compare_routings(&v(&[4, 0]), &v(&[4, 0])).unwrap(), Ordering::Equal);
        assert_eq!(compare_routings(&v(&[2, 1]), &v(&[4, 0])).unwrap(), Ordering::Greater);
        assert_eq!(compare_routings(&v(&[0, 1, 1]), &v(&[2, 0, 1])).unwrap(), Ordering::Greater);
        assert_eq!(compare_routings(&v(&[9, 0, 0]), &v(&[0, 0, 1])).unwrap(), Ordering::Less);
        assert!(matches!(
            compare_routings(&v(&[1]), &v(&[1, 0])),
            Err(Error::VectorLengthMismatch(1, 2))
        ));
    }

    fn two_lone() -> Instance {
        Instance::new(
            4,
            vec![Edge::new(0, 0, 1), Edge::new(1, 2, 3)],
            vec![
                Player::new(0, 1, vec![Path::new(vec![0])]),
                Player::new(2, 3, vec![Path::new(vec![1])]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn vectors_by_definition() {
        let inst = two_lone();
        let r = Routing::new(vec![0, 0]);
        let m = routing_vector(CostModel::Max, &inst, &r).unwrap();
        assert_eq!(m.entries(), &[4, 0]);
        assert_eq!(m.top(), Some(1));
        assert!(matches!(
            routing_vector(CostModel::Sum, &inst, &r),
            Err(Error::NoPotential)
        ));
        // r = N + 2L - 1 = 3, both players cost 1 + 1
        let s = routing_vector(CostModel::SumBucket, &inst, &r).unwrap();
        assert_eq!(s.entries(), &[0, 2, 0]);
    }

    #[test]
    fn single_player_sum_bucket_vector() {
        let inst = Instance::new(
            2,
            vec![Edge::new(0, 0, 1)],
            vec![Player::new(0, 1, vec![Path::new(vec![0])])],
        )
        .unwrap();
        let s = routing_vector(CostModel::SumBucket, &inst, &Routing::new(vec![0])).unwrap();
        assert_eq!(s.r(), 2);
        assert_eq!(s.m(2), 1);
    }

    #[test]
    fn nash_has_no_step() {
        let inst = two_lone();
        let mut state = StepState::new(0);
        let out = best_response_step(
            CostModel::Max,
            &inst,
            &Routing::new(vec![0, 0]),
            &MovePolicy::default(),
            &mut state,
        )
        .unwrap();
        assert!(out.is_none());
        assert!(improving_moves(CostModel::Max, &inst, &Routing::new(vec![0, 0]), 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn parse_policy_names() {
        for o in [PlayerOrder::RoundRobin, PlayerOrder::LowestIndexFirst, PlayerOrder::RandomSeeded] {
            assert_eq!(o.to_string().parse::<PlayerOrder>().unwrap(), o);
        }
        for c in [
            PathChoice::FirstImprovement,
            PathChoice::BestImprovement,
            PathChoice::RandomImprovement,
        ] {
            assert_eq!(c.to_string().parse::<PathChoice>().unwrap(), c);
        }
        assert!("sideways".parse::<PlayerOrder>().is_err());
    }
}
