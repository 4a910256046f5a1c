//! Concrete inequalities behind the stability and price-of-anarchy results,
//! evaluated on actual equilibria.
//!
//! Every `lg` is `⌈lg ·⌉` of the exact integer.

use serde::{Deserialize, Serialize};

use super::{is_nash_state, shortest_strategy, EquilibriumReport};
use crate::cost::{normalized_length, Cost, CostModel, RoutingState};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::game::{ceil_log2, Instance, InstanceStats, Routing};

/// Outcome of one inequality check. `holds` is meaningful only when `applicable`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub name: String,
    pub applicable: bool,
    pub holds: bool,
    pub lhs: Fraction,
    pub rhs: Fraction,
    pub witnesses: Vec<String>,
}

impl BoundVerdict {
    fn compare(name: &str, lhs: Fraction, rhs: Fraction, witnesses: Vec<String>) -> Self {
        BoundVerdict {
            name: name.to_string(),
            applicable: true,
            holds: lhs <= rhs,
            lhs,
            rhs,
            witnesses,
        }
    }

    fn not_applicable(name: &str, lhs: Fraction, rhs: Fraction, why: String) -> Self {
        BoundVerdict {
            name: name.to_string(),
            applicable: false,
            holds: true,
            lhs,
            rhs,
            witnesses: vec![why],
        }
    }

    /// True unless the check applied and failed.
    pub fn ok(&self) -> bool {
        !self.applicable || self.holds
    }
}

fn nash_state<'a>(model: CostModel, inst: &'a Instance, routing: &Routing) -> Result<RoutingState<'a>> {
    let st = RoutingState::new(inst, routing.clone())?;
    if !is_nash_state(model, &st) {
        return Err(Error::NotNash(model));
    }
    Ok(st)
}

fn expect_model(report: &EquilibriumReport, model: CostModel) -> Result<()> {
    if report.model != model {
        return Err(Error::WrongModel {
            expected: model,
            found: report.model,
        });
    }
    Ok(())
}

/// For every player with `x = C̄ − C̄_i`: `|p_i| ≤ |s_i| + x + 1`, where `s_i`
/// is the player's shortest strategy.
///
/// A player whose current path shares a bucket with `s_i` gains nothing by
/// shortening within the bucket, so this can fail on genuine sum-bucket
/// equilibria; [`check_normalized_length_congestion`] is the form that the
/// congestion and PoA bounds actually rely on.
pub fn check_length_congestion(inst: &Instance, nash_routing: &Routing) -> Result<BoundVerdict> {
    let st = nash_state(CostModel::SumBucket, inst, nash_routing)?;
    length_congestion(inst, &st, "length_congestion", |st, i| {
        (st.length(i), shortest_strategy(inst, i).map(|(_, p)| p.len() as Cost))
    })
}

/// `D̄_i ≤ D̄(s_i) + x + 1` for every player, which also bounds `|p_i| ≤ D̄_i`.
pub fn check_normalized_length_congestion(inst: &Instance, nash_routing: &Routing) -> Result<BoundVerdict> {
    let st = nash_state(CostModel::SumBucket, inst, nash_routing)?;
    length_congestion(inst, &st, "normalized_length_congestion", |st, i| {
        (
            st.normalized_length(i),
            shortest_strategy(inst, i).map(|(_, p)| normalized_length(p)),
        )
    })
}

fn length_congestion(
    inst: &Instance,
    st: &RoutingState<'_>,
    name: &str,
    measure: impl Fn(&RoutingState<'_>, usize) -> (Cost, Result<Cost>),
) -> Result<BoundVerdict> {
    let (c_bar, _) = st.social_parts(CostModel::SumBucket);
    let mut witnesses = Vec::new();
    // tightest player: largest lhs - rhs
    let mut tightest: Option<(i64, Cost, Cost)> = None;
    for i in 0..inst.player_count() {
        let x = c_bar - st.normalized_congestion(i);
        let (len, shortest) = measure(st, i);
        let rhs = shortest? + x + 1;
        if len > rhs {
            witnesses.push(format!("player {i}: {len} > {} + {x} + 1", rhs - x - 1));
        }
        let gap = len as i64 - rhs as i64;
        if tightest.is_none_or(|(g, _, _)| gap > g) {
            tightest = Some((gap, len, rhs));
        }
    }
    let (_, lhs, rhs) = tightest.unwrap_or((0, 0, 0));
    let mut v = BoundVerdict::compare(name, Fraction::int(lhs), Fraction::int(rhs), witnesses);
    v.holds = v.witnesses.is_empty();
    Ok(v)
}

/// If `C ≥ D + 2 lg n + 2` then `C ≤ 2·L·C* + 2 lg n`, for a max-model Nash routing.
pub fn check_max_congestion_bound(
    inst: &Instance,
    nash_routing: &Routing,
    report: &EquilibriumReport,
) -> Result<BoundVerdict> {
    expect_model(report, CostModel::Max)?;
    let st = nash_state(CostModel::Max, inst, nash_routing)?;
    let stats = inst.stats();
    let lg = stats.lg_n();
    let (c, d) = st.social_parts(CostModel::Max);
    let rhs = 2 * stats.max_path_len as Cost * report.optimal_c + 2 * lg;
    let name = "max_congestion_bound";
    if c < d + 2 * lg + 2 {
        return Ok(BoundVerdict::not_applicable(
            name,
            Fraction::int(c),
            Fraction::int(rhs),
            format!("C = {c} < D + 2lg n + 2 = {}", d + 2 * lg + 2),
        ));
    }
    Ok(BoundVerdict::compare(
        name,
        Fraction::int(c),
        Fraction::int(rhs),
        vec![format!("C = {c}, D = {d}, L = {}, C* = {}", stats.max_path_len, report.optimal_c)],
    ))
}

/// `PoA ≤ max(2L + 2 lg n, L + 2 lg n + 2)`.
pub fn check_max_poa_bound(report: &EquilibriumReport, stats: &InstanceStats) -> Result<BoundVerdict> {
    expect_model(report, CostModel::Max)?;
    let poa = report.poa.ok_or(Error::EmptyNashSet)?;
    let l = stats.max_path_len as Cost;
    let lg = stats.lg_n();
    let rhs = (2 * l + 2 * lg).max(l + 2 * lg + 2);
    Ok(BoundVerdict::compare(
        "max_poa_bound",
        poa,
        Fraction::int(rhs),
        vec![format!("L = {l}, lg n = {lg}")],
    ))
}

fn sum_bucket_congestion_verdict(c_bar: Cost, report: &EquilibriumReport) -> BoundVerdict {
    let lg = report.stats.lg_n();
    let rhs = 18 * report.optimal_c * report.optimal_d * lg * lg;
    BoundVerdict::compare(
        "sum_bucket_congestion_bound",
        Fraction::int(c_bar),
        Fraction::int(rhs),
        vec![format!(
            "C̄ = {c_bar}, C̄* = {}, D̄* = {}, lg n = {lg}",
            report.optimal_c, report.optimal_d
        )],
    )
}

/// `C̄ ≤ 18·C̄*·D̄*·lg² n` for the worst Nash routing in `report`.
pub fn check_sum_bucket_congestion_bound(report: &EquilibriumReport) -> Result<BoundVerdict> {
    expect_model(report, CostModel::SumBucket)?;
    let c_bar = report.worst_nash_c.ok_or(Error::EmptyNashSet)?;
    Ok(sum_bucket_congestion_verdict(c_bar, report))
}

/// [`check_sum_bucket_congestion_bound`] for an arbitrary Nash routing.
pub fn check_sum_bucket_congestion_bound_for(
    inst: &Instance,
    nash_routing: &Routing,
    report: &EquilibriumReport,
) -> Result<BoundVerdict> {
    expect_model(report, CostModel::SumBucket)?;
    let st = nash_state(CostModel::SumBucket, inst, nash_routing)?;
    Ok(sum_bucket_congestion_verdict(st.social_parts(CostModel::SumBucket).0, report))
}

/// Ratio bound for one sum-bucket Nash routing with `(C̄, D̄)`.
///
/// Congestion-dominated (`4C̄ > D̄`): `SC < 5C̄ ≤ 90·C̄*·D̄*·lg² n`.
/// Length-dominated (`4C̄ ≤ D̄`): `D̄ < 8(D̄* + 1) ≤ 16·D̄*`, so `SC ≤ 5D̄/4 ≤ 20·D̄*`.
/// Both are divided by `SC* = C̄* + D̄*`.
fn sum_bucket_ratio_verdict(c_bar: Cost, d_bar: Cost, report: &EquilibriumReport) -> BoundVerdict {
    let lg = report.stats.lg_n();
    let (cs, ds) = (report.optimal_c, report.optimal_d);
    let sc_star = cs + ds;
    let lhs = Fraction::new(c_bar + d_bar, sc_star);
    let (case, rhs) = if 4 * c_bar > d_bar {
        ("congestion-dominated", Fraction::new(90 * cs * ds * lg * lg, sc_star))
    } else {
        ("length-dominated", Fraction::new(20 * ds, sc_star))
    };
    BoundVerdict::compare(
        "sum_bucket_poa_bound",
        lhs,
        rhs,
        vec![format!("{case}: C̄ = {c_bar}, D̄ = {d_bar}, C̄* = {cs}, D̄* = {ds}, lg n = {lg}")],
    )
}

/// The PoA of `report` against the case bound of its worst Nash routing.
pub fn check_sum_bucket_poa_bound(report: &EquilibriumReport) -> Result<BoundVerdict> {
    expect_model(report, CostModel::SumBucket)?;
    let c_bar = report.worst_nash_c.ok_or(Error::EmptyNashSet)?;
    let d_bar = report.worst_nash_d.ok_or(Error::EmptyNashSet)?;
    Ok(sum_bucket_ratio_verdict(c_bar, d_bar, report))
}

/// `SC(p)/SC*` against the case bound, for an arbitrary Nash routing.
pub fn check_sum_bucket_ratio_bound_for(
    inst: &Instance,
    nash_routing: &Routing,
    report: &EquilibriumReport,
) -> Result<BoundVerdict> {
    expect_model(report, CostModel::SumBucket)?;
    let st = nash_state(CostModel::SumBucket, inst, nash_routing)?;
    let (c, d) = st.social_parts(CostModel::SumBucket);
    Ok(sum_bucket_ratio_verdict(c, d, report))
}

/// Original and bucket-normalized metrics of the same routing side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketComparison {
    pub c: Cost,
    pub d: Cost,
    pub c_bar: Cost,
    pub d_bar: Cost,
    /// `C / C̄`.
    pub congestion_ratio: Fraction,
    /// `D̄ / D`.
    pub length_ratio: Fraction,
    pub buckets_in_use: usize,
    /// `C̄ ≤ C ≤ C̄·(lg L + 1)`.
    pub congestion_holds: bool,
    /// `D ≤ D̄ ≤ 2D`.
    pub length_holds: bool,
    /// The reversed reading `D̄ ≤ D ≤ 2D̄`; true only when every chosen
    /// length is already the top of its bucket.
    pub reversed_length_holds: bool,
}

pub fn bucket_vs_original_report(inst: &Instance, routing: &Routing) -> Result<BucketComparison> {
    let st = RoutingState::new(inst, routing.clone())?;
    let (c, d) = st.social_parts(CostModel::Sum);
    let (c_bar, d_bar) = st.social_parts(CostModel::SumBucket);
    let mut buckets: Vec<usize> = (0..inst.player_count())
        .map(|i| crate::game::floor_log2(st.length(i)) as usize)
        .collect();
    buckets.sort_unstable();
    buckets.dedup();
    let lg_l = ceil_log2(inst.stats().max_path_len as u64);
    Ok(BucketComparison {
        c,
        d,
        c_bar,
        d_bar,
        congestion_ratio: if c_bar == 0 { Fraction::int(1) } else { Fraction::new(c, c_bar) },
        length_ratio: if d == 0 { Fraction::int(1) } else { Fraction::new(d_bar, d) },
        buckets_in_use: buckets.len(),
        congestion_holds: c_bar <= c && c <= c_bar * (lg_l + 1),
        length_holds: d <= d_bar && d_bar <= 2 * d,
        reversed_length_holds: d_bar <= d && d <= 2 * d_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::equilibrium_report;
    use crate::game::{Edge, Path, Player};

    /// One player, a length-4 and a length-6 option in the same bucket.
    fn same_bucket_detour() -> Instance {
        let mut edges = Vec::new();
        let mut next_node = 2;
        let mut chain = |len: usize, edges: &mut Vec<Edge>| {
            let mut ids = Vec::new();
            let mut at = 0;
            for k in 0..len {
                let to = if k + 1 == len {
                    1
                } else {
                    next_node += 1;
                    next_node - 1
                };
                ids.push(edges.len());
                edges.push(Edge::new(edges.len(), at, to));
                at = to;
            }
            Path::new(ids)
        };
        let short = chain(4, &mut edges);
        let long = chain(6, &mut edges);
        Instance::new(next_node, edges, vec![Player::new(0, 1, vec![short, long])]).unwrap()
    }

    #[test]
    fn shortest_strategy_passes_length_check() {
        let inst = same_bucket_detour();
        let v = check_length_congestion(&inst, &Routing::new(vec![0])).unwrap();
        assert!(v.holds);
        assert_eq!((v.lhs, v.rhs), (Fraction::int(4), Fraction::int(5)));
    }

    #[test]
    fn same_bucket_detour_is_nash_but_breaks_unnormalized_check() {
        let inst = same_bucket_detour();
        let r = Routing::new(vec![1]);
        // cost 1 + 7 on both options
        assert!(crate::equilibria::is_nash(CostModel::SumBucket, &inst, &r).unwrap().is_nash);
        let v = check_length_congestion(&inst, &r).unwrap();
        assert!(v.applicable && !v.holds);
        assert_eq!((v.lhs, v.rhs), (Fraction::int(6), Fraction::int(5)));
        let n = check_normalized_length_congestion(&inst, &r).unwrap();
        assert!(n.holds);
    }

    #[test]
    fn rejects_non_nash_input() {
        let inst = Instance::new(
            3,
            vec![Edge::new(0, 0, 1), Edge::new(1, 0, 2), Edge::new(2, 2, 1)],
            vec![
                Player::new(0, 1, vec![Path::new(vec![0]), Path::new(vec![1, 2])]),
                Player::new(0, 1, vec![Path::new(vec![0])]),
                Player::new(0, 1, vec![Path::new(vec![0])]),
                Player::new(0, 1, vec![Path::new(vec![0])]),
            ],
        )
        .unwrap();
        // crowded edge costs 4 + 1, the detour 1 + 3
        assert!(matches!(
            check_length_congestion(&inst, &Routing::new(vec![0, 0, 0, 0])),
            Err(Error::NotNash(CostModel::SumBucket))
        ));
        assert!(check_length_congestion(&inst, &Routing::new(vec![1, 0, 0, 0])).unwrap().holds);
        let rep = equilibrium_report(CostModel::Sum, &inst, 10).unwrap();
        assert!(matches!(
            check_sum_bucket_poa_bound(&rep),
            Err(Error::WrongModel { .. })
        ));
    }

    #[test]
    fn max_bounds_on_single_profile() {
        let inst = Instance::new(
            2,
            vec![Edge::new(0, 0, 1)],
            vec![Player::new(0, 1, vec![Path::new(vec![0])])],
        )
        .unwrap();
        let rep = equilibrium_report(CostModel::Max, &inst, 10).unwrap();
        let v = check_max_poa_bound(&rep, &inst.stats()).unwrap();
        assert!(v.holds);
        assert_eq!(v.lhs, Fraction::int(1));
        let c = check_max_congestion_bound(&inst, &Routing::new(vec![0]), &rep).unwrap();
        assert!(!c.applicable);

        let sb = equilibrium_report(CostModel::SumBucket, &inst, 10).unwrap();
        let v = check_sum_bucket_congestion_bound(&sb).unwrap();
        // n = 2: 1 <= 18 * 1 * 1 * 1
        assert!(v.holds);
        assert_eq!(v.rhs, Fraction::int(18));
        assert!(check_sum_bucket_poa_bound(&sb).unwrap().holds);
    }

    #[test]
    fn bucket_comparison_single_bucket() {
        let inst = same_bucket_detour();
        let b = bucket_vs_original_report(&inst, &Routing::new(vec![1])).unwrap();
        assert_eq!((b.c, b.c_bar, b.d, b.d_bar), (1, 1, 6, 7));
        assert!(b.congestion_holds && b.length_holds);
        assert!(!b.reversed_length_holds);
    }
}
