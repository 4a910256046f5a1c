//! Congestion, length and cost under the three cost models.
//!
//! All quantities are exact integers. A path of length `l` lives in bucket
//! `⌊lg l⌋`; its normalized length is the largest length in that bucket.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{floor_log2, Instance, Path, Routing};

pub type Cost = u64;

/// How a player's congestion and length combine into a cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostModel {
    /// `max(C_i, D_i)`, social cost `max(C, D)`.
    Max,
    /// `C_i + D_i`, social cost `C + D`.
    Sum,
    /// Bucket-normalized congestion plus normalized length.
    SumBucket,
}

impl CostModel {
    pub const ALL: [CostModel; 3] = [CostModel::Max, CostModel::Sum, CostModel::SumBucket];

    pub fn combine(self, congestion: Cost, length: Cost) -> Cost {
        match self {
            CostModel::Max => congestion.max(length),
            CostModel::Sum | CostModel::SumBucket => congestion + length,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CostModel::Max => "max",
            CostModel::Sum => "sum",
            CostModel::SumBucket => "sum-bucket",
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max" => Ok(CostModel::Max),
            "sum" => Ok(CostModel::Sum),
            "sum-bucket" | "sumbucket" => Ok(CostModel::SumBucket),
            other => Err(format!("unknown cost model `{other}` (max, sum, sum-bucket)")),
        }
    }
}

/// `k` with `2^k <= length < 2^(k+1)`.
pub fn bucket_index(length: usize) -> Result<usize> {
    if length == 0 {
        Err(Error::ZeroLength)
    } else {
        Ok(floor_log2(length as u64) as usize)
    }
}

/// `2^(B(p)+1) - 1`. Panics on an empty path, which a valid instance never holds.
pub fn normalized_length(path: &Path) -> Cost {
    normalized_length_of(path.len())
}

pub(crate) fn normalized_length_of(len: usize) -> Cost {
    let k = floor_log2(len as u64);
    (1u64 << (k + 1)) - 1
}

fn bucket_of(len: usize) -> usize {
    floor_log2(len as u64) as usize
}

/// Per-edge path counts for one routing, in total and split by bucket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongestionProfile {
    bucket_count: usize,
    totals: Vec<u32>,
    per_bucket: Vec<u32>,
}

impl CongestionProfile {
    pub fn new(inst: &Instance, routing: &Routing) -> Result<Self> {
        inst.check_routing(routing)?;
        Ok(Self::build(inst, routing))
    }

    pub(crate) fn build(inst: &Instance, routing: &Routing) -> Self {
        let bucket_count = inst.stats().bucket_count.max(1);
        let mut profile = CongestionProfile {
            bucket_count,
            totals: vec![0; inst.edges.len()],
            per_bucket: vec![0; inst.edges.len() * bucket_count],
        };
        for i in 0..inst.players.len() {
            profile.add(inst.chosen(routing, i));
        }
        profile
    }

    fn add(&mut self, path: &Path) {
        let k = bucket_of(path.len());
        for &e in path.edges() {
            self.totals[e] += 1;
            self.per_bucket[e * self.bucket_count + k] += 1;
        }
    }

    fn remove(&mut self, path: &Path) {
        let k = bucket_of(path.len());
        for &e in path.edges() {
            self.totals[e] -= 1;
            self.per_bucket[e * self.bucket_count + k] -= 1;
        }
    }

    pub fn bucket_count(&self) -> usize {
        self.bucket_count
    }

    /// `C_e`.
    pub fn total(&self, edge: usize) -> Cost {
        Cost::from(self.totals[edge])
    }

    /// Paths in bucket `k` using `edge`.
    pub fn in_bucket(&self, edge: usize, k: usize) -> Cost {
        if k >= self.bucket_count {
            return 0;
        }
        Cost::from(self.per_bucket[edge * self.bucket_count + k])
    }

    /// Largest per-bucket count on `edge` (the edge's normalized congestion).
    pub fn normalized_edge(&self, edge: usize) -> Cost {
        let row = &self.per_bucket[edge * self.bucket_count..(edge + 1) * self.bucket_count];
        row.iter().copied().max().map_or(0, Cost::from)
    }

    pub fn per_edge_total(&self) -> &[u32] {
        &self.totals
    }

    /// Non-zero `(edge, bucket) -> count` entries.
    pub fn per_edge_per_bucket(&self) -> BTreeMap<(usize, usize), Cost> {
        let mut out = BTreeMap::new();
        for e in 0..self.totals.len() {
            for k in 0..self.bucket_count {
                let c = self.in_bucket(e, k);
                if c > 0 {
                    out.insert((e, k), c);
                }
            }
        }
        out
    }

    /// `C = max_e C_e`.
    pub fn max_total(&self) -> Cost {
        self.totals.iter().copied().max().map_or(0, Cost::from)
    }

    /// `C_p`: maximum edge congestion along `path`.
    pub fn path_congestion(&self, path: &Path) -> Cost {
        path.edges().iter().map(|&e| self.total(e)).max().unwrap_or(0)
    }

    /// Maximum same-bucket count along `path`.
    pub fn path_normalized_congestion(&self, path: &Path) -> Cost {
        let k = bucket_of(path.len());
        path.edges()
            .iter()
            .map(|&e| self.in_bucket(e, k))
            .max()
            .unwrap_or(0)
    }
}

/// A routing together with its congestion profile, updated in place as
/// players switch strategies.
#[derive(Clone, Debug)]
pub struct RoutingState<'a> {
    inst: &'a Instance,
    routing: Routing,
    profile: CongestionProfile,
}

impl<'a> RoutingState<'a> {
    pub fn new(inst: &'a Instance, routing: Routing) -> Result<Self> {
        inst.check_routing(&routing)?;
        Ok(Self::new_unchecked(inst, routing))
    }

    pub(crate) fn new_unchecked(inst: &'a Instance, routing: Routing) -> Self {
        let profile = CongestionProfile::build(inst, &routing);
        RoutingState {
            inst,
            routing,
            profile,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn routing(&self) -> &Routing {
        &self.routing
    }

    pub fn into_routing(self) -> Routing {
        self.routing
    }

    pub fn profile(&self) -> &CongestionProfile {
        &self.profile
    }

    pub fn path(&self, player: usize) -> &'a Path {
        self.inst.chosen(&self.routing, player)
    }

    /// `C_i`.
    pub fn congestion(&self, player: usize) -> Cost {
        self.profile.path_congestion(self.path(player))
    }

    /// `D_i`.
    pub fn length(&self, player: usize) -> Cost {
        self.path(player).len() as Cost
    }

    /// `C̄_i`, counting player `i` itself.
    pub fn normalized_congestion(&self, player: usize) -> Cost {
        self.profile.path_normalized_congestion(self.path(player))
    }

    /// `D̄_i`.
    pub fn normalized_length(&self, player: usize) -> Cost {
        normalized_length(self.path(player))
    }

    /// Congestion and length components entering the player's cost.
    pub fn player_parts(&self, model: CostModel, player: usize) -> (Cost, Cost) {
        match model {
            CostModel::Max | CostModel::Sum => (self.congestion(player), self.length(player)),
            CostModel::SumBucket => (
                self.normalized_congestion(player),
                self.normalized_length(player),
            ),
        }
    }

    pub fn player_cost(&self, model: CostModel, player: usize) -> Cost {
        let (c, d) = self.player_parts(model, player);
        model.combine(c, d)
    }

    /// Network-level `(C, D)` for Max/Sum or `(C̄, D̄)` for SumBucket.
    pub fn social_parts(&self, model: CostModel) -> (Cost, Cost) {
        let n = self.inst.players.len();
        match model {
            CostModel::Max | CostModel::Sum => {
                let d = (0..n).map(|i| self.length(i)).max().unwrap_or(0);
                (self.profile.max_total(), d)
            }
            CostModel::SumBucket => {
                let c = (0..n).map(|i| self.normalized_congestion(i)).max().unwrap_or(0);
                let d = (0..n).map(|i| self.normalized_length(i)).max().unwrap_or(0);
                (c, d)
            }
        }
    }

    pub fn social_cost(&self, model: CostModel) -> Cost {
        let (c, d) = self.social_parts(model);
        model.combine(c, d)
    }

    /// Cost `player` would pay after switching alone to `strategy`.
    pub fn deviation_cost(&self, model: CostModel, player: usize, strategy: usize) -> Cost {
        let current = self.routing.choices()[player];
        if strategy == current {
            return self.player_cost(model, player);
        }
        let old = self.path(player);
        let new = self.inst.strategy(player, strategy);
        let old_bucket = bucket_of(old.len());
        let new_bucket = bucket_of(new.len());
        let mut congestion = 0;
        for &e in new.edges() {
            let shared = old.contains(e);
            let c = match model {
                CostModel::Max | CostModel::Sum => self.profile.total(e) + 1 - Cost::from(shared),
                CostModel::SumBucket => {
                    self.profile.in_bucket(e, new_bucket) + 1
                        - Cost::from(shared && old_bucket == new_bucket)
                }
            };
            congestion = congestion.max(c);
        }
        let length = match model {
            CostModel::SumBucket => normalized_length(new),
            _ => new.len() as Cost,
        };
        model.combine(congestion, length)
    }

    /// Moves `player` to `strategy`, updating the profile incrementally.
    pub fn switch(&mut self, player: usize, strategy: usize) {
        let old = self.path(player);
        self.profile.remove(old);
        self.routing.set(player, strategy);
        let new = self.path(player);
        self.profile.add(new);
    }
}

/// `C_e(p)`.
pub fn edge_congestion(inst: &Instance, routing: &Routing, edge: usize) -> Result<Cost> {
    if edge >= inst.edges.len() {
        return Err(Error::UnknownEdge(edge));
    }
    Ok(CongestionProfile::new(inst, routing)?.total(edge))
}

/// `C_i(p)`.
pub fn path_congestion(inst: &Instance, routing: &Routing, player: usize) -> Result<Cost> {
    inst.check_player(player)?;
    Ok(RoutingState::new(inst, routing.clone())?.congestion(player))
}

/// `C̄_i(p)`.
pub fn normalized_congestion(inst: &Instance, routing: &Routing, player: usize) -> Result<Cost> {
    inst.check_player(player)?;
    Ok(RoutingState::new(inst, routing.clone())?.normalized_congestion(player))
}

/// `pc_i(p)` under `model`.
pub fn player_cost(model: CostModel, inst: &Instance, routing: &Routing, player: usize) -> Result<Cost> {
    inst.check_player(player)?;
    Ok(RoutingState::new(inst, routing.clone())?.player_cost(model, player))
}

/// `SC(p)` under `model`.
pub fn social_cost(model: CostModel, inst: &Instance, routing: &Routing) -> Result<Cost> {
    Ok(RoutingState::new(inst, routing.clone())?.social_cost(model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Edge, Player};

    #[test]
    fn buckets() {
        assert_eq!(bucket_index(1).unwrap(), 0);
        assert_eq!(bucket_index(5).unwrap(), 2);
        assert_eq!(bucket_index(8).unwrap(), 3);
        assert_eq!(bucket_index(7).unwrap(), 2);
        assert!(matches!(bucket_index(0), Err(Error::ZeroLength)));
    }

    #[test]
    fn normalized_lengths() {
        assert_eq!(normalized_length(&Path::new(vec![0])), 1);
        assert_eq!(normalized_length(&Path::new((0..5).collect())), 7);
        assert_eq!(normalized_length(&Path::new((0..4).collect())), 7);
        assert_eq!(normalized_length(&Path::new((0..8).collect())), 15);
    }

    #[test]
    fn combine() {
        assert_eq!(CostModel::Max.combine(3, 5), 5);
        assert_eq!(CostModel::Sum.combine(3, 5), 8);
        assert_eq!(CostModel::SumBucket.combine(3, 7), 10);
        for m in CostModel::ALL {
            assert_eq!(m.name().parse::<CostModel>().unwrap(), m);
        }
    }

    fn two_disjoint() -> Instance {
        // two players on disjoint single edges, plus a shared two-edge option
        Instance::new(
            4,
            vec![Edge::new(0, 0, 1), Edge::new(1, 2, 3), Edge::new(2, 0, 2), Edge::new(3, 1, 3)],
            vec![
                Player::new(0, 1, vec![Path::new(vec![0])]),
                Player::new(2, 3, vec![Path::new(vec![1]), Path::new(vec![2, 0, 3])]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lone_players() {
        let inst = two_disjoint();
        let r = Routing::new(vec![0, 0]);
        for i in 0..2 {
            assert_eq!(path_congestion(&inst, &r, i).unwrap(), 1);
            assert_eq!(normalized_congestion(&inst, &r, i).unwrap(), 1);
        }
        assert_eq!(edge_congestion(&inst, &r, 2).unwrap(), 0);
        assert!(matches!(edge_congestion(&inst, &r, 9), Err(Error::UnknownEdge(9))));
        assert!(matches!(path_congestion(&inst, &r, 5), Err(Error::UnknownPlayer(5))));
    }

    #[test]
    fn different_buckets_do_not_interfere() {
        let inst = two_disjoint();
        let r = Routing::new(vec![0, 1]);
        let st = RoutingState::new(&inst, r.clone()).unwrap();
        assert_eq!(st.congestion(0), 2);
        assert_eq!(st.congestion(1), 2);
        assert_eq!(st.normalized_congestion(0), 1);
        assert_eq!(st.normalized_congestion(1), 1);
        assert_eq!(st.social_cost(CostModel::Max), 3);
        assert_eq!(st.social_cost(CostModel::Sum), 5);
        // C̄ = 1, D̄ = 3
        assert_eq!(st.social_cost(CostModel::SumBucket), 4);
    }

    #[test]
    fn deviation_matches_recompute() {
        let inst = two_disjoint();
        let st = RoutingState::new(&inst, Routing::new(vec![0, 0])).unwrap();
        for m in CostModel::ALL {
            let direct = st.deviation_cost(m, 1, 1);
            let after = player_cost(m, &inst, &Routing::new(vec![0, 1]), 1).unwrap();
            assert_eq!(direct, after, "{m}");
        }
    }

    #[test]
    fn switch_keeps_profile_consistent() {
        let inst = two_disjoint();
        let mut st = RoutingState::new(&inst, Routing::new(vec![0, 0])).unwrap();
        st.switch(1, 1);
        let fresh = CongestionProfile::new(&inst, &Routing::new(vec![0, 1])).unwrap();
        assert_eq!(st.profile(), &fresh);
        st.switch(1, 0);
        let fresh = CongestionProfile::new(&inst, &Routing::new(vec![0, 0])).unwrap();
        assert_eq!(st.profile(), &fresh);
    }
}
