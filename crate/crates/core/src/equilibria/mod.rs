//! Exact equilibrium analysis by exhaustive enumeration of pure profiles.

mod bounds;
mod expansion;

pub use bounds::{
    bucket_vs_original_report, check_length_congestion, check_max_congestion_bound,
    check_max_poa_bound, check_normalized_length_congestion, check_sum_bucket_congestion_bound,
    check_sum_bucket_congestion_bound_for, check_sum_bucket_poa_bound,
    check_sum_bucket_ratio_bound_for, BoundVerdict, BucketComparison,
};
pub use expansion::{expansion_diagnostic, ExpansionDiagnostic, PlayerImage};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::cost::{Cost, CostModel, RoutingState};
use crate::dynamics::{improving_in, vector_len, vector_of, RoutingVector};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::game::{Instance, InstanceStats, Path, Routing};

pub const DEFAULT_ENUMERATE_CAP: u64 = 1_000_000;

/// A strictly improving unilateral deviation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub player: usize,
    pub strategy: usize,
    pub old_cost: Cost,
    pub new_cost: Cost,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Lowest-index player that can improve, with its best move.
    pub witness: Option<Deviation>,
}

pub(crate) fn nash_in(model: CostModel, st: &RoutingState<'_>) -> NashCheck {
    for i in 0..st.instance().player_count() {
        let moves = improving_in(model, st, i);
        if let Some(&(strategy, new_cost)) = moves.first() {
            return NashCheck {
                is_nash: false,
                witness: Some(Deviation {
                    player: i,
                    strategy,
                    old_cost: st.player_cost(model, i),
                    new_cost,
                }),
            };
        }
    }
    NashCheck {
        is_nash: true,
        witness: None,
    }
}

pub(crate) fn is_nash_state(model: CostModel, st: &RoutingState<'_>) -> bool {
    (0..st.instance().player_count()).all(|i| improving_in(model, st, i).is_empty())
}

/// Whether every player is locally optimal in `routing`.
pub fn is_nash(model: CostModel, inst: &Instance, routing: &Routing) -> Result<NashCheck> {
    let st = RoutingState::new(inst, routing.clone())?;
    Ok(nash_in(model, &st))
}

/// Every profile, once, in lexicographic (mixed-radix, last player fastest) order.
#[derive(Clone, Debug)]
pub struct Profiles {
    radix: Vec<usize>,
    next: Option<Vec<usize>>,
    remaining: u64,
}

impl Profiles {
    fn range(radix: Vec<usize>, start: u64, len: u64) -> Self {
        let next = (len > 0).then(|| decode(&radix, start));
        Profiles {
            radix,
            next,
            remaining: len,
        }
    }
}

impl Iterator for Profiles {
    type Item = Routing;

    fn next(&mut self) -> Option<Routing> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.next.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            let mut n = cur.clone();
            for k in (0..n.len()).rev() {
                n[k] += 1;
                if n[k] < self.radix[k] {
                    break;
                }
                n[k] = 0;
            }
            self.next = Some(n);
        }
        Some(Routing::new(cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

fn decode(radix: &[usize], mut index: u64) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        let b = radix[k] as u64;
        out[k] = (index % b) as usize;
        index /= b;
    }
    out
}

/// Mixed-radix position of `routing` in [`enumerate_profiles`] order.
pub fn profile_index(inst: &Instance, routing: &Routing) -> u64 {
    inst.players
        .iter()
        .zip(routing.choices())
        .fold(0u64, |acc, (p, &c)| acc * p.strategies.len() as u64 + c as u64)
}

fn checked_count(inst: &Instance, cap: u64) -> Result<u64> {
    let count = inst.profile_count();
    if count > BigUint::from(cap) {
        return Err(Error::ProfileCapExceeded { count, cap });
    }
    Ok(u64::try_from(count).expect("count below cap fits in u64"))
}

/// Streams every profile, refusing if there are more than `cap`.
pub fn enumerate_profiles(inst: &Instance, cap: u64) -> Result<Profiles> {
    let total = checked_count(inst, cap)?;
    Ok(Profiles::range(inst.strategy_counts(), 0, total))
}

/// Exhaustive equilibrium summary for one cost model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub model: CostModel,
    pub stats: InstanceStats,
    pub profiles: u64,
    pub optimal_sc: Cost,
    /// Lowest-index optimal profile.
    pub optimal_routing: Routing,
    /// `C*` (or `C̄*` under sum-bucket) of the optimal routing.
    pub optimal_c: Cost,
    /// `D*` (or `D̄*` under sum-bucket) of the optimal routing.
    pub optimal_d: Cost,
    pub nash_count: u64,
    pub best_nash_sc: Option<Cost>,
    pub best_nash_routing: Option<Routing>,
    pub worst_nash_sc: Option<Cost>,
    pub worst_nash_routing: Option<Routing>,
    pub worst_nash_c: Option<Cost>,
    pub worst_nash_d: Option<Cost>,
    /// Worst Nash social cost over the optimum; absent with no Nash routing.
    pub poa: Option<Fraction>,
    pub pos: Option<Fraction>,
    /// Nash social cost -> number of Nash routings with it.
    pub nash_social_costs: BTreeMap<Cost, u64>,
}

impl EquilibriumReport {
    pub fn optimum_sc_fraction(&self) -> Fraction {
        Fraction::int(self.optimal_sc)
    }

    /// `SC(p) / SC*`.
    pub fn ratio(&self, sc: Cost) -> Fraction {
        Fraction::new(sc, self.optimal_sc)
    }
}

/// Report plus the full list of Nash routings, in enumeration order.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: EquilibriumReport,
    pub nash: Vec<Routing>,
}

#[derive(Clone, Debug)]
struct Scored {
    index: u64,
    sc: Cost,
    parts: (Cost, Cost),
    routing: Routing,
}

#[derive(Clone, Debug, Default)]
struct Shard {
    optimum: Option<Scored>,
    best_nash: Option<Scored>,
    worst_nash: Option<Scored>,
    nash: Vec<Routing>,
    histogram: BTreeMap<Cost, u64>,
}

impl Shard {
    // Earlier shards come first, so ties keep the lowest index.
    fn merge(mut self, later: Shard) -> Shard {
        fn pick(a: Option<Scored>, b: Option<Scored>, better: impl Fn(Cost, Cost) -> bool) -> Option<Scored> {
            match (a, b) {
                (Some(a), Some(b)) => Some(if better(b.sc, a.sc) { b } else { a }),
                (a, b) => a.or(b),
            }
        }
        self.optimum = pick(self.optimum, later.optimum, |b, a| b < a);
        self.best_nash = pick(self.best_nash, later.best_nash, |b, a| b < a);
        self.worst_nash = pick(self.worst_nash, later.worst_nash, |b, a| b > a);
        self.nash.extend(later.nash);
        for (k, v) in later.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self
    }
}

fn scan(model: CostModel, inst: &Instance, radix: &[usize], start: u64, len: u64) -> Shard {
    let mut shard = Shard::default();
    for (k, routing) in Profiles::range(radix.to_vec(), start, len).enumerate() {
        let index = start + k as u64;
        let st = RoutingState::new_unchecked(inst, routing);
        let parts = st.social_parts(model);
        let sc = model.combine(parts.0, parts.1);
        let scored = |st: &RoutingState<'_>| Scored {
            index,
            sc,
            parts,
            routing: st.routing().clone(),
        };
        if shard.optimum.as_ref().is_none_or(|o| sc < o.sc) {
            shard.optimum = Some(scored(&st));
        }
        if is_nash_state(model, &st) {
            if shard.best_nash.as_ref().is_none_or(|o| sc < o.sc) {
                shard.best_nash = Some(scored(&st));
            }
            if shard.worst_nash.as_ref().is_none_or(|o| sc > o.sc) {
                shard.worst_nash = Some(scored(&st));
            }
            *shard.histogram.entry(sc).or_default() += 1;
            shard.nash.push(st.into_routing());
        }
    }
    debug_assert!(shard.optimum.as_ref().is_none_or(|o| o.index >= start));
    shard
}

/// Enumerates all profiles, sharding across `jobs` threads. The result does
/// not depend on `jobs`.
pub fn analyze(model: CostModel, inst: &Instance, cap: u64, jobs: usize) -> Result<Analysis> {
    let total = checked_count(inst, cap)?;
    let radix = inst.strategy_counts();
    let jobs = (jobs.max(1) as u64).min(total.max(1));
    let chunk = total.div_ceil(jobs);
    let shards: Vec<Shard> = if jobs == 1 {
        vec![scan(model, inst, &radix, 0, total)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let start = j * chunk;
                    let len = chunk.min(total.saturating_sub(start));
                    let radix = &radix;
                    s.spawn(move || scan(model, inst, radix, start, len))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        })
    };
    let merged = shards
        .into_iter()
        .reduce(Shard::merge)
        .unwrap_or_default();
    let optimum = merged.optimum.expect("at least one profile");
    let nash_count = merged.nash.len() as u64;
    let ratio = |s: &Option<Scored>| s.as_ref().map(|s| Fraction::new(s.sc, optimum.sc));
    let report = EquilibriumReport {
        model,
        stats: inst.stats(),
        profiles: total,
        optimal_sc: optimum.sc,
        optimal_routing: optimum.routing.clone(),
        optimal_c: optimum.parts.0,
        optimal_d: optimum.parts.1,
        nash_count,
        best_nash_sc: merged.best_nash.as_ref().map(|s| s.sc),
        best_nash_routing: merged.best_nash.as_ref().map(|s| s.routing.clone()),
        worst_nash_sc: merged.worst_nash.as_ref().map(|s| s.sc),
        worst_nash_routing: merged.worst_nash.as_ref().map(|s| s.routing.clone()),
        worst_nash_c: merged.worst_nash.as_ref().map(|s| s.parts.0),
        worst_nash_d: merged.worst_nash.as_ref().map(|s| s.parts.1),
        poa: ratio(&merged.worst_nash),
        pos: ratio(&merged.best_nash),
        nash_social_costs: merged.histogram,
    };
    Ok(Analysis {
        report,
        nash: merged.nash,
    })
}

/// Optimum, Nash set, PoA and PoS by exhaustive enumeration.
pub fn equilibrium_report(model: CostModel, inst: &Instance, cap: u64) -> Result<EquilibriumReport> {
    Ok(analyze(model, inst, cap, 1)?.report)
}

/// The profile whose routing vector is smallest (lowest index on ties).
pub fn minimum_routing(model: CostModel, inst: &Instance, cap: u64) -> Result<Routing> {
    let r = vector_len(model, inst)?;
    let mut best: Option<(RoutingVector, Routing)> = None;
    for routing in enumerate_profiles(inst, cap)? {
        let st = RoutingState::new_unchecked(inst, routing);
        let v = vector_of(model, &st, r);
        let better = match &best {
            None => true,
            Some((bv, _)) => v.entries().iter().rev().lt(bv.entries().iter().rev()),
        };
        if better {
            best = Some((v, st.into_routing()));
        }
    }
    Ok(best.expect("at least one profile").1)
}

/// Minimum-length strategy of `player`, ties to the lowest index.
pub fn shortest_strategy(inst: &Instance, player: usize) -> Result<(usize, &Path)> {
    inst.check_player(player)?;
    inst.players[player]
        .strategies
        .iter()
        .enumerate()
        .min_by_key(|(k, p)| (p.len(), *k))
        .ok_or(Error::InvalidRouting(format!("player {player} has no strategies")))
}

/// Every bound for `report.model`: the report-level bounds (when a Nash
/// routing exists) and, if given, the per-routing bounds on `nash_routing`.
pub fn bound_verdicts(
    inst: &Instance,
    report: &EquilibriumReport,
    nash_routing: Option<&Routing>,
) -> Result<Vec<BoundVerdict>> {
    let mut out = Vec::new();
    match report.model {
        CostModel::Sum => return Ok(out),
        CostModel::Max => {
            if report.nash_count > 0 {
                out.push(check_max_poa_bound(report, &inst.stats())?);
            }
            if let Some(r) = nash_routing {
                out.push(check_max_congestion_bound(inst, r, report)?);
            }
        }
        CostModel::SumBucket => {
            if report.nash_count > 0 {
                out.push(check_sum_bucket_congestion_bound(report)?);
                out.push(check_sum_bucket_poa_bound(report)?);
            }
            if let Some(r) = nash_routing {
                out.push(check_length_congestion(inst, r)?);
                out.push(check_normalized_length_congestion(inst, r)?);
                out.push(check_sum_bucket_congestion_bound_for(inst, r, report)?);
                out.push(check_sum_bucket_ratio_bound_for(inst, r, report)?);
            }
        }
    }
    if let Some(r) = nash_routing {
        let d = expansion_diagnostic(report.model, inst, r, report)?;
        if report.model == CostModel::SumBucket {
            out.push(d.nonempty_verdict());
        }
        out.push(d.found_x_verdict());
    }
    Ok(out)
}
