use crate::cost::{Cost, CostModel, RoutingState};
use crate::error::{Error, Result};
use crate::game::{Edge, Instance, Path, Player, Routing};

/// Incremental builder for instances made of private chains and shared edges.
#[derive(Default)]
struct Builder {
    nodes: usize,
    edges: Vec<Edge>,
}

impl Builder {
    fn node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    fn edge(&mut self, u: usize, v: usize) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge::new(id, u, v));
        id
    }

    /// Fresh chain of `len` edges from `from` to `to`; returns its edge ids.
    fn chain(&mut self, from: usize, to: usize, len: usize) -> Vec<usize> {
        let mut ids = Vec::with_capacity(len);
        let mut at = from;
        for k in 0..len {
            let next = if k + 1 == len { to } else { self.node() };
            ids.push(self.edge(at, next));
            at = next;
        }
        ids
    }

    /// Walk `start -> chain -> shared[0] -> chain -> ... -> shared[k-1] -> chain -> end`,
    /// where `gaps` holds the `shared.len() + 1` chain lengths (each >= 1).
    fn route(&mut self, start: usize, end: usize, shared: &[usize], gaps: &[usize]) -> Path {
        debug_assert_eq!(gaps.len(), shared.len() + 1);
        let mut ids = Vec::new();
        let mut at = start;
        for (k, &e) in shared.iter().enumerate() {
            let Edge { u, v, .. } = self.edges[e];
            ids.extend(self.chain(at, u, gaps[k]));
            ids.push(e);
            at = v;
        }
        ids.extend(self.chain(at, end, gaps[shared.len()]));
        Path::new(ids)
    }
}

/// Ring of `n` nodes; player `i` connects the ends of edge `i` and may use
/// that edge alone (strategy 0) or the other `n - 1` edges (strategy 1).
pub fn gen_ring(n: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::Generator(format!("ring needs n >= 3, got {n}")));
    }
    let edges: Vec<Edge> = (0..n).map(|i| Edge::new(i, i, (i + 1) % n)).collect();
    let players = (0..n)
        .map(|i| {
            let direct = Path::new(vec![i]);
            let around = Path::new((1..n).map(|k| (i + n - k) % n).collect());
            Player::new(i, (i + 1) % n, vec![direct, around])
        })
        .collect();
    Instance::new(n, edges, players)
}

/// Player congestion, length and sum cost.
pub type CostTriple = (Cost, Cost, Cost);

/// One row of the reference cost table for the no-Nash sum instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoNashRow {
    /// Strategy of each active player: 0 for the first path, 1 for the alternative.
    pub choices: [usize; 3],
    pub costs: [CostTriple; 3],
    /// Active player (0-based) listed as not locally optimal.
    pub named_player: usize,
}

const fn row(choices: [usize; 3], costs: [CostTriple; 3], named_player: usize) -> NoNashRow {
    NoNashRow {
        choices,
        costs,
        named_player,
    }
}

/// `(C_i, D_i, pc_i)` of the three active players in each of the eight routings.
pub const NO_NASH_TABLE: [NoNashRow; 8] = [
    row([0, 0, 0], [(4, 10, 14), (4, 7, 11), (4, 7, 11)], 0),
    row([1, 0, 0], [(5, 8, 13), (5, 7, 12), (5, 7, 12)], 1),
    row([1, 1, 0], [(5, 8, 13), (1, 10, 11), (5, 7, 12)], 2),
    row([1, 1, 1], [(5, 8, 13), (1, 10, 11), (1, 10, 11)], 0),
    row([0, 1, 1], [(2, 10, 12), (2, 10, 12), (2, 10, 12)], 1),
    row([0, 0, 1], [(3, 10, 13), (4, 7, 11), (2, 10, 12)], 2),
    row([0, 1, 0], [(3, 10, 13), (2, 10, 12), (4, 7, 11)], 1),
    row([1, 0, 1], [(5, 8, 13), (5, 7, 12), (1, 10, 11)], 1),
];

/// Number of single-strategy players in [`gen_no_nash_sum`].
pub const NO_NASH_PASSIVE: usize = 11;

/// Full routing of the no-Nash instance from the three active choices.
pub fn no_nash_routing(active: [usize; 3]) -> Routing {
    let mut choices = active.to_vec();
    choices.extend(std::iter::repeat_n(0, NO_NASH_PASSIVE));
    Routing::new(choices)
}

/// A sum game with no pure Nash routing.
///
/// Three active players each choose between two paths over six shared
/// edges `e1..e6`; the remaining paths are private chains. Eleven passive
/// single-edge players add congestion 1 to `e3`, 3 to `e4` and `e5`, and
/// 4 to `e6`. The result is checked against [`NO_NASH_TABLE`].
pub fn gen_no_nash_sum() -> Result<Instance> {
    let mut b = Builder::default();
    let terminals: Vec<(usize, usize)> = (0..3).map(|_| (b.node(), b.node())).collect();
    let shared: Vec<usize> = (0..6)
        .map(|_| {
            let (u, v) = (b.node(), b.node());
            b.edge(u, v)
        })
        .collect();
    let e = |k: usize| shared[k - 1];

    // (shared edges in order, chain lengths) per strategy; lengths 10/8, 7/10, 7/10
    let specs: [[(Vec<usize>, Vec<usize>); 2]; 3] = [
        [
            (vec![e(1), e(2), e(3)], vec![1, 1, 1, 4]),
            (vec![e(4), e(5), e(6)], vec![1, 1, 1, 2]),
        ],
        [
            (vec![e(3), e(4)], vec![1, 1, 3]),
            (vec![e(1)], vec![1, 8]),
        ],
        [
            (vec![e(3), e(5)], vec![1, 1, 3]),
            (vec![e(2)], vec![1, 8]),
        ],
    ];
    let mut players = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let (s, t) = terminals[i];
        let strategies = spec
            .iter()
            .map(|(on, gaps)| b.route(s, t, on, gaps))
            .collect();
        players.push(Player::new(s, t, strategies));
    }
    for (k, extra) in [(3, 1), (4, 3), (5, 3), (6, 4)] {
        let edge = b.edges[e(k)];
        for _ in 0..extra {
            players.push(Player::new(edge.u, edge.v, vec![Path::new(vec![edge.id])]));
        }
    }
    debug_assert_eq!(players.len(), 3 + NO_NASH_PASSIVE);
    let inst = Instance::new(b.nodes, b.edges, players)?;
    verify_no_nash_table(&inst)?;
    Ok(inst)
}

/// Compares all 24 `(C_i, D_i, pc_i)` triples with [`NO_NASH_TABLE`].
pub fn verify_no_nash_table(inst: &Instance) -> Result<()> {
    for row in &NO_NASH_TABLE {
        let st = RoutingState::new(inst, no_nash_routing(row.choices))?;
        for (i, &want) in row.costs.iter().enumerate() {
            let got = (
                st.congestion(i),
                st.length(i),
                st.player_cost(CostModel::Sum, i),
            );
            if got != want {
                return Err(Error::TableMismatch(format!(
                    "routing {:?}, player {}: got {got:?}, expected {want:?}",
                    row.choices,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// `a²` players from `u` to `v`: a path `p` of length `a` and `a` edge-disjoint
/// paths `q_1..q_a` of length `a`, `q_i` sharing only the `i`-th edge of `p`.
/// Players `a·(i-1) .. a·i` hold `{p, q_i}` (strategy 0 is `p`).
pub fn gen_bucket_tight(a: usize) -> Result<Instance> {
    if a < 2 {
        return Err(Error::Generator(format!("bucket-tight needs a >= 2, got {a}")));
    }
    let mut b = Builder::default();
    let xs: Vec<usize> = (0..=a).map(|_| b.node()).collect();
    let p_edges: Vec<usize> = (0..a).map(|k| b.edge(xs[k], xs[k + 1])).collect();
    let p = Path::new(p_edges.clone());
    let (u, v) = (xs[0], xs[a]);
    let mut players = Vec::with_capacity(a * a);
    for i in 1..=a {
        let mut q = b.chain(u, xs[i - 1], i - 1);
        q.push(p_edges[i - 1]);
        q.extend(b.chain(xs[i], v, a - i));
        let q = Path::new(q);
        for _ in 0..a {
            players.push(Player::new(u, v, vec![p.clone(), q.clone()]));
        }
    }
    Instance::new(b.nodes, b.edges, players)
}
