//! Immutable game model: graph, players and their explicit strategy sets.
//!
//! Edges are undirected and a path is an ordered, edge-simple walk between
//! the owning player's terminals. Strategy sets are given explicitly; nothing
//! in this crate enumerates graph paths implicitly.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge. `id` equals the edge's position in [`Instance::edges`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(id: usize, u: usize, v: usize) -> Self {
        Edge { id, u, v }
    }

    /// The endpoint opposite to `node`, or `None` if the edge does not touch it.
    pub fn other(&self, node: usize) -> Option<usize> {
        if self.u == node {
            Some(self.v)
        } else if self.v == node {
            Some(self.u)
        } else {
            None
        }
    }
}

/// An ordered sequence of edge ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(edge_ids: Vec<usize>) -> Self {
        Path(edge_ids)
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    /// Number of edges, `|p|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.contains(&edge)
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Player {
    pub source: usize,
    pub dest: usize,
    pub strategies: Vec<Path>,
}

impl Player {
    pub fn new(source: usize, dest: usize, strategies: Vec<Path>) -> Self {
        Player {
            source,
            dest,
            strategies,
        }
    }
}

/// A routing game: `node_count` nodes, undirected edges and players.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub node_count: usize,
    pub edges: Vec<Edge>,
    pub players: Vec<Player>,
}

impl Instance {
    /// Builds an instance and rejects it unless [`validate_instance`] is clean.
    pub fn new(node_count: usize, edges: Vec<Edge>, players: Vec<Player>) -> Result<Self> {
        let inst = Instance {
            node_count,
            edges,
            players,
        };
        let violations = validate_instance(&inst);
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn strategy(&self, player: usize, index: usize) -> &Path {
        &self.players[player].strategies[index]
    }

    /// Chosen path of `player` in `routing`.
    pub fn chosen(&self, routing: &Routing, player: usize) -> &Path {
        self.strategy(player, routing.choices()[player])
    }

    pub fn strategy_counts(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.strategies.len()).collect()
    }

    /// Exact number of pure strategy profiles.
    pub fn profile_count(&self) -> BigUint {
        self.players
            .iter()
            .fold(BigUint::from(1u32), |acc, p| acc * p.strategies.len())
    }

    pub fn stats(&self) -> InstanceStats {
        InstanceStats::of(self)
    }

    pub fn check_routing(&self, routing: &Routing) -> Result<()> {
        if routing.len() != self.players.len() {
            return Err(Error::InvalidRouting(format!(
                "{} choices for {} players",
                routing.len(),
                self.players.len()
            )));
        }
        for (i, (&c, p)) in routing.choices().iter().zip(&self.players).enumerate() {
            if c >= p.strategies.len() {
                return Err(Error::InvalidRouting(format!(
                    "player {i} chooses strategy {c} but has {}",
                    p.strategies.len()
                )));
            }
        }
        Ok(())
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player < self.players.len() {
            Ok(())
        } else {
            Err(Error::UnknownPlayer(player))
        }
    }
}

/// A pure strategy profile: one strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Routing(Vec<usize>);

impl Routing {
    pub fn new(choices: Vec<usize>) -> Self {
        Routing(choices)
    }

    /// Every player on strategy `index`.
    pub fn uniform(players: usize, index: usize) -> Self {
        Routing(vec![index; players])
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of this routing with `player` switched to `strategy`.
    pub fn with(&self, player: usize, strategy: usize) -> Self {
        let mut next = self.0.clone();
        next[player] = strategy;
        Routing(next)
    }

    pub(crate) fn set(&mut self, player: usize, strategy: usize) {
        self.0[player] = strategy;
    }
}

impl From<Vec<usize>> for Routing {
    fn from(v: Vec<usize>) -> Self {
        Routing(v)
    }
}

impl fmt::Display for Routing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Size parameters recomputable from an [`Instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    /// Longest path over all strategy sets, `L`.
    pub max_path_len: usize,
    /// Player count, `N`.
    pub players: usize,
    /// Node count, `n`.
    pub nodes: usize,
    pub edges: usize,
    /// Index of the highest possibly non-empty bucket plus one.
    pub bucket_count: usize,
}

impl InstanceStats {
    pub fn of(inst: &Instance) -> Self {
        let max_path_len = inst
            .players
            .iter()
            .flat_map(|p| p.strategies.iter().map(Path::len))
            .max()
            .unwrap_or(0);
        let bucket_count = if max_path_len == 0 {
            0
        } else {
            floor_log2(max_path_len as u64) as usize + 1
        };
        InstanceStats {
            max_path_len,
            players: inst.players.len(),
            nodes: inst.node_count,
            edges: inst.edges.len(),
            bucket_count,
        }
    }

    /// `⌈lg n⌉`, the integer used wherever a bound mentions `lg n`.
    pub fn lg_n(&self) -> u64 {
        ceil_log2(self.nodes as u64)
    }

    /// `⌈lg L⌉`.
    pub fn lg_l(&self) -> u64 {
        ceil_log2(self.max_path_len as u64)
    }
}

pub(crate) fn floor_log2(x: u64) -> u32 {
    debug_assert!(x > 0);
    63 - x.leading_zeros()
}

/// Smallest `k` with `2^k >= x`; 0 for `x <= 1`.
pub fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

/// One broken [`Instance`] invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoNodes,
    EdgeIdNotDense { position: usize, id: usize },
    EdgeEndpointOutOfRange { edge: usize, node: usize },
    TerminalOutOfRange { player: usize, node: usize },
    NoStrategies { player: usize },
    EmptyPath { player: usize, path: usize },
    UnknownEdge { player: usize, path: usize, edge: usize },
    RepeatedEdge { player: usize, path: usize, edge: usize },
    NotFromSource { player: usize, path: usize, edge: usize },
    BrokenWalk { player: usize, path: usize, edge: usize },
    NotToDest { player: usize, path: usize, ends_at: usize },
}

impl Violation {
    /// Player named by the violation, if any.
    pub fn player(&self) -> Option<usize> {
        use Violation::*;
        match *self {
            TerminalOutOfRange { player, .. }
            | NoStrategies { player }
            | EmptyPath { player, .. }
            | UnknownEdge { player, .. }
            | RepeatedEdge { player, .. }
            | NotFromSource { player, .. }
            | BrokenWalk { player, .. }
            | NotToDest { player, .. } => Some(player),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match *self {
            NoNodes => write!(f, "instance has no nodes"),
            EdgeIdNotDense { position, id } => {
                write!(f, "edge at position {position} has id {id}")
            }
            EdgeEndpointOutOfRange { edge, node } => {
                write!(f, "edge {edge} references node {node} out of range")
            }
            TerminalOutOfRange { player, node } => {
                write!(f, "player {player} terminal {node} out of range")
            }
            NoStrategies { player } => write!(f, "player {player} has no strategies"),
            EmptyPath { player, path } => write!(f, "player {player} path {path} is empty"),
            UnknownEdge { player, path, edge } => {
                write!(f, "player {player} path {path} uses unknown edge {edge}")
            }
            RepeatedEdge { player, path, edge } => {
                write!(f, "player {player} path {path} repeats edge {edge}")
            }
            NotFromSource { player, path, edge } => write!(
                f,
                "player {player} path {path} does not start at the source (first edge {edge})"
            ),
            BrokenWalk { player, path, edge } => write!(
                f,
                "player {player} path {path} is not a walk: edge {edge} does not continue it"
            ),
            NotToDest {
                player,
                path,
                ends_at,
            } => write!(
                f,
                "player {player} path {path} ends at node {ends_at}, not at the destination"
            ),
        }
    }
}

/// Lists every broken invariant; empty iff the instance is well formed.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.node_count == 0 {
        out.push(Violation::NoNodes);
    }
    for (pos, e) in inst.edges.iter().enumerate() {
        if e.id != pos {
            out.push(Violation::EdgeIdNotDense { position: pos, id: e.id });
        }
        for node in [e.u, e.v] {
            if node >= inst.node_count {
                out.push(Violation::EdgeEndpointOutOfRange { edge: e.id, node });
            }
        }
    }
    // Walk checks index edges by position; bail out if ids are not usable.
    let edges_ok = out.is_empty();
    for (pi, player) in inst.players.iter().enumerate() {
        for node in [player.source, player.dest] {
            if node >= inst.node_count {
                out.push(Violation::TerminalOutOfRange { player: pi, node });
            }
        }
        if player.strategies.is_empty() {
            out.push(Violation::NoStrategies { player: pi });
        }
        for (si, path) in player.strategies.iter().enumerate() {
            if let Some(v) = check_path(inst, edges_ok, pi, si, player, path) {
                out.push(v);
            }
        }
    }
    out
}

fn check_path(
    inst: &Instance,
    edges_ok: bool,
    pi: usize,
    si: usize,
    player: &Player,
    path: &Path,
) -> Option<Violation> {
    if path.is_empty() {
        return Some(Violation::EmptyPath { player: pi, path: si });
    }
    let mut seen = std::collections::HashSet::new();
    for &e in path.edges() {
        if e >= inst.edges.len() {
            return Some(Violation::UnknownEdge { player: pi, path: si, edge: e });
        }
        if !seen.insert(e) {
            return Some(Violation::RepeatedEdge { player: pi, path: si, edge: e });
        }
    }
    if !edges_ok {
        return None;
    }
    let mut at = player.source;
    for (k, &e) in path.edges().iter().enumerate() {
        match inst.edges[e].other(at) {
            Some(next) => at = next,
            None if k == 0 => {
                return Some(Violation::NotFromSource { player: pi, path: si, edge: e })
            }
            None => return Some(Violation::BrokenWalk { player: pi, path: si, edge: e }),
        }
    }
    if at != player.dest {
        return Some(Violation::NotToDest {
            player: pi,
            path: si,
            ends_at: at,
        });
    }
    None
}
