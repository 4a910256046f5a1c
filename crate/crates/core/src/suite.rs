//! Reproduction battery: named checks for the worked instances and a seeded
//! random battery for dynamics, equilibria and bounds.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{CostModel, RoutingState};
use crate::dynamics::{random_start, run_dynamics, MovePolicy, Outcome, PathChoice, PlayerOrder, DEFAULT_MAX_STEPS};
use crate::equilibria::{
    analyze, check_length_congestion, check_max_congestion_bound, check_max_poa_bound,
    check_normalized_length_congestion, check_sum_bucket_congestion_bound, check_sum_bucket_congestion_bound_for,
    check_sum_bucket_poa_bound, check_sum_bucket_ratio_bound_for, expansion_diagnostic, is_nash, minimum_routing,
    Analysis, BoundVerdict, EquilibriumReport, DEFAULT_ENUMERATE_CAP,
};
use crate::error::Result;
use crate::fraction::Fraction;
use crate::game::{Instance, Routing};
use crate::instances::{
    gen_bucket_tight, gen_no_nash_sum, gen_random_grid, gen_ring, no_nash_routing, verify_no_nash_table, GridSpec,
    NO_NASH_TABLE,
};

/// Deterministic policies used against the no-Nash instance.
pub const CYCLE_POLICIES: [MovePolicy; 4] = [
    MovePolicy {
        player_order: PlayerOrder::RoundRobin,
        path_choice: PathChoice::BestImprovement,
    },
    MovePolicy {
        player_order: PlayerOrder::RoundRobin,
        path_choice: PathChoice::FirstImprovement,
    },
    MovePolicy {
        player_order: PlayerOrder::LowestIndexFirst,
        path_choice: PathChoice::BestImprovement,
    },
    MovePolicy {
        player_order: PlayerOrder::LowestIndexFirst,
        path_choice: PathChoice::FirstImprovement,
    },
];

pub const CYCLE_STEP_LIMIT: usize = 100;

/// Policies run from a random start on every battery instance.
pub const BATTERY_POLICIES: [MovePolicy; 3] = [
    MovePolicy {
        player_order: PlayerOrder::RoundRobin,
        path_choice: PathChoice::BestImprovement,
    },
    MovePolicy {
        player_order: PlayerOrder::LowestIndexFirst,
        path_choice: PathChoice::FirstImprovement,
    },
    MovePolicy {
        player_order: PlayerOrder::RandomSeeded,
        path_choice: PathChoice::RandomImprovement,
    },
];

pub const BATTERY_SIZE: usize = 200;
pub const BATTERY_SEED: u64 = 2024;
pub const DENSE_SIZE: usize = 50;

/// Violation categories recorded by the battery.
pub mod kind {
    pub const MONOTONE: &str = "vector_decreases";
    pub const CONVERGED: &str = "converged";
    pub const IN_NASH_SET: &str = "final_in_nash_set";
    pub const POS_ONE: &str = "pos_is_one";
    pub const MINIMUM_NASH: &str = "minimum_routing_nash";
    pub const MINIMUM_OPTIMAL: &str = "minimum_routing_optimal";
    pub const LENGTH_CONGESTION: &str = "length_congestion";
    pub const NORMALIZED_LENGTH_CONGESTION: &str = "normalized_length_congestion";
    pub const MAX_CONGESTION: &str = "max_congestion_bound";
    pub const MAX_POA: &str = "max_poa_bound";
    pub const SUM_BUCKET_CONGESTION: &str = "sum_bucket_congestion_bound";
    pub const SUM_BUCKET_POA: &str = "sum_bucket_poa_bound";
    pub const EXPANSION_NONEMPTY: &str = "expansion_nonempty_images";
    pub const EXPANSION_SMALL_IMAGE: &str = "expansion_small_image";
    pub const ERROR: &str = "error";
}

/// Tallies for a group of checks; `violations` maps a [`kind`] to messages.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub runs: usize,
    pub steps: usize,
    pub nash_checked: usize,
    pub evaluated: BTreeMap<&'static str, usize>,
    pub violations: BTreeMap<&'static str, Vec<String>>,
}

impl Tally {
    pub fn record(&mut self, kind: &'static str, ok: bool, what: impl FnOnce() -> String) {
        *self.evaluated.entry(kind).or_default() += 1;
        if !ok {
            self.violations.entry(kind).or_default().push(what());
        }
    }

    fn verdict(&mut self, kind: &'static str, v: Result<BoundVerdict>, at: &str) {
        match v {
            Ok(v) => {
                if v.applicable {
                    self.record(kind, v.holds, || {
                        format!("{at}: {} <= {} fails; {}", v.lhs, v.rhs, v.witnesses.join("; "))
                    });
                }
            }
            Err(e) => self.record(kind, false, || format!("{at}: {e}")),
        }
    }

    pub fn count(&self, kind: &str) -> usize {
        self.violations.get(kind).map_or(0, Vec::len)
    }

    pub fn evaluated(&self, kind: &str) -> usize {
        self.evaluated.get(kind).copied().unwrap_or(0)
    }

    pub fn clean(&self, kinds: &[&str]) -> bool {
        kinds.iter().all(|k| self.count(k) == 0)
    }

    pub fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        self.runs += other.runs;
        self.steps += other.steps;
        self.nash_checked += other.nash_checked;
        for (k, v) in other.evaluated {
            *self.evaluated.entry(k).or_default() += v;
        }
        for (k, v) in other.violations {
            self.violations.entry(k).or_default().extend(v);
        }
    }

    /// `kind=violations/evaluated` for each listed kind.
    pub fn summary(&self, kinds: &[&str]) -> String {
        kinds
            .iter()
            .map(|k| format!("{k}={}/{}", self.count(k), self.evaluated(k)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Player indices (0-based, active players only) that have an improving move.
pub fn no_nash_unhappy(inst: &Instance, active: [usize; 3]) -> Result<Vec<usize>> {
    let routing = no_nash_routing(active);
    let st = RoutingState::new(inst, routing)?;
    Ok((0..3)
        .filter(|&i| st.deviation_cost(CostModel::Sum, i, 1 - active[i]) < st.player_cost(CostModel::Sum, i))
        .collect())
}

/// Non-optimal players implied by the reference table's own costs.
pub fn table_unhappy(active: [usize; 3]) -> Vec<usize> {
    let pc = |choices: [usize; 3], i: usize| {
        NO_NASH_TABLE
            .iter()
            .find(|r| r.choices == choices)
            .map(|r| r.costs[i].2)
            .expect("table covers all routings")
    };
    (0..3)
        .filter(|&i| {
            let mut flipped = active;
            flipped[i] = 1 - flipped[i];
            pc(flipped, i) < pc(active, i)
        })
        .collect()
}

/// Verifies the named player per table row is non-optimal and that the full
/// non-optimal set matches what the table's costs imply.
pub fn check_no_nash_named_players(inst: &Instance) -> Result<std::result::Result<String, String>> {
    let mut notes = Vec::new();
    for row in &NO_NASH_TABLE {
        let got = no_nash_unhappy(inst, row.choices)?;
        let implied = table_unhappy(row.choices);
        if !got.contains(&row.named_player) {
            return Ok(Err(format!(
                "routing {:?}: player {} is optimal",
                row.choices,
                row.named_player + 1
            )));
        }
        if got != implied {
            return Ok(Err(format!(
                "routing {:?}: non-optimal {:?}, table implies {:?}",
                row.choices, got, implied
            )));
        }
        if got.len() > 1 {
            notes.push(format!(
                "{:?} has non-optimal players {:?}",
                row.choices,
                got.iter().map(|i| i + 1).collect::<Vec<_>>()
            ));
        }
    }
    Ok(Ok(if notes.is_empty() {
        "every named player is non-optimal".into()
    } else {
        format!("every named player is non-optimal; {}", notes.join(", "))
    }))
}

/// Random battery instance `k`: grid with at most 25 nodes, 2..=6 players and
/// 2..=4 strategies per player.
pub fn battery_spec(base_seed: u64, k: usize) -> GridSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(k as u64));
    let rows = rng.gen_range(2..=5);
    let cols = rng.gen_range(2..=5);
    GridSpec {
        rows,
        cols,
        players: rng.gen_range(2..=6),
        strategies_per_player: rng.gen_range(2..=4),
        seed: rng.gen(),
    }
}

/// Checks every applicable bound on one Nash routing.
pub fn check_nash_bounds(tally: &mut Tally, inst: &Instance, routing: &Routing, report: &EquilibriumReport, at: &str) {
    tally.nash_checked += 1;
    let at = format!("{at} routing [{routing}]");
    match report.model {
        CostModel::Max => {
            tally.verdict(kind::MAX_CONGESTION, check_max_congestion_bound(inst, routing, report), &at);
        }
        CostModel::SumBucket => {
            tally.verdict(kind::LENGTH_CONGESTION, check_length_congestion(inst, routing), &at);
            tally.verdict(
                kind::NORMALIZED_LENGTH_CONGESTION,
                check_normalized_length_congestion(inst, routing),
                &at,
            );
            tally.verdict(
                kind::SUM_BUCKET_CONGESTION,
                check_sum_bucket_congestion_bound_for(inst, routing, report),
                &at,
            );
            tally.verdict(kind::SUM_BUCKET_POA, check_sum_bucket_ratio_bound_for(inst, routing, report), &at);
        }
        CostModel::Sum => return,
    }
    match expansion_diagnostic(report.model, inst, routing, report) {
        Ok(d) => {
            if report.model == CostModel::SumBucket {
                tally.verdict(kind::EXPANSION_NONEMPTY, Ok(d.nonempty_verdict()), &at);
            }
            tally.verdict(kind::EXPANSION_SMALL_IMAGE, Ok(d.found_x_verdict()), &at);
        }
        Err(e) => tally.record(kind::EXPANSION_SMALL_IMAGE, false, || format!("{at}: {e}")),
    }
}

/// Report-level bounds (PoA and worst-case congestion).
pub fn check_report_bounds(tally: &mut Tally, inst: &Instance, report: &EquilibriumReport, at: &str) {
    if report.nash_count == 0 {
        return;
    }
    match report.model {
        CostModel::Max => tally.verdict(kind::MAX_POA, check_max_poa_bound(report, &inst.stats()), at),
        CostModel::SumBucket => {
            tally.verdict(kind::SUM_BUCKET_CONGESTION, check_sum_bucket_congestion_bound(report), at);
            tally.verdict(kind::SUM_BUCKET_POA, check_sum_bucket_poa_bound(report), at);
        }
        CostModel::Sum => {}
    }
}

/// Dynamics, equilibrium and bound checks on one instance.
pub fn battery_instance(tally: &mut Tally, model: CostModel, inst: &Instance, seed: u64, label: &str) {
    tally.instances += 1;
    let Analysis { report, nash } = match analyze(model, inst, DEFAULT_ENUMERATE_CAP, 1) {
        Ok(a) => a,
        Err(e) => return tally.record(kind::ERROR, false, || format!("{label}: {e}")),
    };
    let nash_set: HashSet<&Routing> = nash.iter().collect();

    for (p, policy) in BATTERY_POLICIES.iter().enumerate() {
        let start = random_start(inst, seed.wrapping_add(p as u64));
        let trace = match run_dynamics(model, inst, &start, policy, seed, DEFAULT_MAX_STEPS) {
            Ok(t) => t,
            Err(e) => return tally.record(kind::ERROR, false, || format!("{label}: {e}")),
        };
        tally.runs += 1;
        tally.steps += trace.steps.len();
        for s in &trace.steps {
            let ok = match (&s.vector_before, &s.vector_after) {
                (Some(b), Some(a)) => a.entries().iter().rev().lt(b.entries().iter().rev()),
                _ => false,
            };
            tally.record(kind::MONOTONE, ok, || format!("{label} policy {p} step {}", s.step));
        }
        let converged = matches!(trace.outcome, Outcome::Converged { .. });
        tally.record(kind::CONVERGED, converged, || {
            format!("{label} policy {p}: {}", trace.outcome.label())
        });
        if converged {
            let r = trace.outcome.routing();
            tally.record(kind::IN_NASH_SET, nash_set.contains(r), || {
                format!("{label} policy {p}: [{r}] not in Nash set")
            });
        }
    }

    match minimum_routing(model, inst, DEFAULT_ENUMERATE_CAP) {
        Ok(m) => {
            let nash_ok = nash_set.contains(&m);
            tally.record(kind::MINIMUM_NASH, nash_ok, || format!("{label}: minimum [{m}] is not Nash"));
            if model == CostModel::Max {
                let sc = RoutingState::new_unchecked(inst, m.clone()).social_cost(model);
                tally.record(kind::MINIMUM_OPTIMAL, sc == report.optimal_sc, || {
                    format!("{label}: minimum [{m}] has sc {sc}, optimum {}", report.optimal_sc)
                });
                tally.record(kind::POS_ONE, report.best_nash_sc == Some(report.optimal_sc), || {
                    format!("{label}: best nash {:?}, optimum {}", report.best_nash_sc, report.optimal_sc)
                });
            }
        }
        Err(e) => tally.record(kind::ERROR, false, || format!("{label}: {e}")),
    }

    check_report_bounds(tally, inst, &report, label);
    for r in &nash {
        check_nash_bounds(tally, inst, r, &report, label);
    }
}

/// Crowded instance `k`: at most 6 nodes, 8..=12 players with 2 strategies,
/// so that congestion dominates length.
pub fn dense_spec(base_seed: u64, k: usize) -> GridSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(k as u64));
    GridSpec {
        rows: 2,
        cols: rng.gen_range(2..=3),
        players: rng.gen_range(8..=12),
        strategies_per_player: 2,
        seed: rng.gen(),
    }
}

/// The seeded random battery for one model.
pub fn random_battery(model: CostModel, count: usize, base_seed: u64) -> Tally {
    battery_with(model, count, base_seed, battery_spec)
}

/// [`random_battery`] over instances drawn by `spec`.
pub fn battery_with(model: CostModel, count: usize, base_seed: u64, spec: fn(u64, usize) -> GridSpec) -> Tally {
    let mut tally = Tally::default();
    for k in 0..count {
        let spec = spec(base_seed, k);
        let label = format!("instance {k} (seed {})", spec.seed);
        match gen_random_grid(&spec) {
            Ok(inst) => battery_instance(&mut tally, model, &inst, spec.seed, &label),
            Err(e) => tally.record(kind::ERROR, false, || format!("{label}: {e}")),
        }
    }
    tally
}

/// Summary of the ring(8) analysis under max.
#[derive(Clone, Debug)]
pub struct RingSummary {
    pub report: EquilibriumReport,
    pub direct_nash: bool,
    pub around_nash: bool,
    pub bounds: Tally,
}

pub fn ring_summary(n: usize) -> Result<RingSummary> {
    let inst = gen_ring(n)?;
    let Analysis { report, nash } = analyze(CostModel::Max, &inst, DEFAULT_ENUMERATE_CAP, 1)?;
    let direct_nash = is_nash(CostModel::Max, &inst, &Routing::uniform(n, 0))?.is_nash;
    let around_nash = is_nash(CostModel::Max, &inst, &Routing::uniform(n, 1))?.is_nash;
    let mut bounds = Tally::default();
    let label = format!("ring{n}");
    check_report_bounds(&mut bounds, &inst, &report, &label);
    for r in &nash {
        check_nash_bounds(&mut bounds, &inst, r, &report, &label);
    }
    Ok(RingSummary {
        report,
        direct_nash,
        around_nash,
        bounds,
    })
}

/// Exact values for the bucket-tight instance.
#[derive(Clone, Debug)]
pub struct BucketTightSummary {
    pub a: usize,
    pub players: usize,
    pub all_p_nash_sum: bool,
    pub all_q_nash_sum: bool,
    pub sc_all_p_sum: u64,
    pub sc_all_q_sum: u64,
    pub c_bar_all_p: u64,
    pub d_bar_all_p: u64,
    pub sum: EquilibriumReport,
    pub sum_bucket: EquilibriumReport,
    pub bounds: Tally,
}

pub fn bucket_tight_summary(a: usize, jobs: usize) -> Result<BucketTightSummary> {
    let inst = gen_bucket_tight(a)?;
    let n = inst.player_count();
    let all_p = Routing::uniform(n, 0);
    let all_q = Routing::uniform(n, 1);
    let sum = analyze(CostModel::Sum, &inst, DEFAULT_ENUMERATE_CAP, jobs)?.report;
    let sum_bucket = analyze(CostModel::SumBucket, &inst, DEFAULT_ENUMERATE_CAP, jobs)?.report;
    let p_state = RoutingState::new(&inst, all_p.clone())?;
    let q_state = RoutingState::new(&inst, all_q.clone())?;
    let (c_bar_all_p, d_bar_all_p) = p_state.social_parts(CostModel::SumBucket);
    let mut bounds = Tally::default();
    check_report_bounds(&mut bounds, &inst, &sum_bucket, "bucket-tight");
    Ok(BucketTightSummary {
        a,
        players: n,
        all_p_nash_sum: is_nash(CostModel::Sum, &inst, &all_p)?.is_nash,
        all_q_nash_sum: is_nash(CostModel::Sum, &inst, &all_q)?.is_nash,
        sc_all_p_sum: p_state.social_cost(CostModel::Sum),
        sc_all_q_sum: q_state.social_cost(CostModel::Sum),
        c_bar_all_p,
        d_bar_all_p,
        sum,
        sum_bucket,
        bounds,
    })
}

/// Outcome of the no-Nash dynamics under one policy.
#[derive(Clone, Debug)]
pub struct CycleRun {
    pub policy: MovePolicy,
    pub outcome: Outcome,
    pub steps: usize,
}

pub fn no_nash_cycles(inst: &Instance) -> Result<Vec<CycleRun>> {
    let start = no_nash_routing([0, 0, 0]);
    CYCLE_POLICIES
        .iter()
        .map(|policy| {
            let t = run_dynamics(CostModel::Sum, inst, &start, policy, 0, CYCLE_STEP_LIMIT)?;
            Ok(CycleRun {
                policy: *policy,
                steps: t.steps.len(),
                outcome: t.outcome,
            })
        })
        .collect()
}

/// A named check of the reproduction suite.
pub struct Check {
    pub name: &'static str,
    run: fn() -> Result<std::result::Result<String, String>>,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type CheckResult = Result<std::result::Result<String, String>>;

fn pass_if(ok: bool, detail: String) -> CheckResult {
    Ok(if ok { Ok(detail) } else { Err(detail) })
}

fn no_nash_table() -> CheckResult {
    let inst = gen_no_nash_sum()?;
    verify_no_nash_table(&inst)?;
    Ok(Ok("24 triples match".into()))
}

fn no_nash_named() -> CheckResult {
    check_no_nash_named_players(&gen_no_nash_sum()?)
}

fn no_nash_empty() -> CheckResult {
    let inst = gen_no_nash_sum()?;
    let r = analyze(CostModel::Sum, &inst, DEFAULT_ENUMERATE_CAP, 1)?.report;
    pass_if(r.nash_count == 0, format!("nash_count={} over {} profiles", r.nash_count, r.profiles))
}

fn no_nash_cycle() -> CheckResult {
    let runs = no_nash_cycles(&gen_no_nash_sum()?)?;
    let ok = runs
        .iter()
        .all(|r| matches!(r.outcome, Outcome::CycleDetected { .. }) && r.steps <= CYCLE_STEP_LIMIT);
    let detail = runs
        .iter()
        .map(|r| format!("{}/{}:{}@{}", r.policy.player_order, r.policy.path_choice, r.outcome.label(), r.steps))
        .collect::<Vec<_>>()
        .join(" ");
    pass_if(ok, detail)
}

fn ring8() -> CheckResult {
    let s = ring_summary(8)?;
    let r = &s.report;
    let ok = r.optimal_sc == 1
        && r.pos == Some(Fraction::int(1))
        && r.worst_nash_sc == Some(7)
        && r.poa == Some(Fraction::int(7))
        && s.direct_nash
        && s.around_nash;
    let fmt = |f: Option<Fraction>| f.map_or("undefined".into(), |f| f.to_string());
    pass_if(
        ok,
        format!(
            "optimal_sc={} pos={} poa={} nash_count={}",
            r.optimal_sc,
            fmt(r.pos),
            fmt(r.poa),
            r.nash_count
        ),
    )
}

fn ring8_bounds() -> CheckResult {
    let s = ring_summary(8)?;
    let kinds = [kind::MAX_CONGESTION, kind::MAX_POA, kind::EXPANSION_SMALL_IMAGE];
    pass_if(s.bounds.violations.is_empty(), s.bounds.summary(&kinds))
}

const MAX_KINDS: [&str; 9] = [
    kind::MONOTONE,
    kind::CONVERGED,
    kind::IN_NASH_SET,
    kind::POS_ONE,
    kind::MINIMUM_NASH,
    kind::MINIMUM_OPTIMAL,
    kind::MAX_CONGESTION,
    kind::MAX_POA,
    kind::EXPANSION_SMALL_IMAGE,
];

const SUM_BUCKET_KINDS: [&str; 10] = [
    kind::MONOTONE,
    kind::CONVERGED,
    kind::IN_NASH_SET,
    kind::MINIMUM_NASH,
    kind::LENGTH_CONGESTION,
    kind::NORMALIZED_LENGTH_CONGESTION,
    kind::SUM_BUCKET_CONGESTION,
    kind::SUM_BUCKET_POA,
    kind::EXPANSION_NONEMPTY,
    kind::EXPANSION_SMALL_IMAGE,
];

fn battery_check(t: Tally, kinds: &[&str]) -> CheckResult {
    let mut detail = format!(
        "{} instances, {} runs, {} steps, {} nash; {}",
        t.instances,
        t.runs,
        t.steps,
        t.nash_checked,
        t.summary(kinds)
    );
    if let Some(first) = t.violations.values().flatten().next() {
        detail.push_str(&format!("; first: {first}"));
    }
    pass_if(t.violations.is_empty(), detail)
}

fn random_max() -> CheckResult {
    battery_check(random_battery(CostModel::Max, BATTERY_SIZE, BATTERY_SEED), &MAX_KINDS)
}

fn random_sum_bucket() -> CheckResult {
    battery_check(random_battery(CostModel::SumBucket, BATTERY_SIZE, BATTERY_SEED), &SUM_BUCKET_KINDS)
}

fn dense_max() -> CheckResult {
    battery_check(battery_with(CostModel::Max, DENSE_SIZE, BATTERY_SEED, dense_spec), &MAX_KINDS)
}

fn dense_sum_bucket() -> CheckResult {
    battery_check(
        battery_with(CostModel::SumBucket, DENSE_SIZE, BATTERY_SEED, dense_spec),
        &SUM_BUCKET_KINDS,
    )
}

fn bucket_tight() -> CheckResult {
    let s = bucket_tight_summary(4, 1)?;
    let a = s.a as u64;
    let ok = s.players == 16
        && s.all_p_nash_sum
        && s.all_q_nash_sum
        && s.sc_all_p_sum == a + 16
        && s.sc_all_q_sum == 2 * a
        && s.c_bar_all_p == 16
        && s.d_bar_all_p == 7
        && s.sum.nash_social_costs.contains_key(&20)
        && s.sum.nash_social_costs.contains_key(&8)
        && s.sum_bucket.poa.is_some()
        && s.bounds.violations.is_empty();
    let poa = s.sum_bucket.poa.map_or("undefined".into(), |f| f.to_string());
    pass_if(
        ok,
        format!(
            "SC(all-p)={} SC(all-Q)={} C̄(all-p)={} D̄={} sum-bucket poa={poa}; {}",
            s.sc_all_p_sum,
            s.sc_all_q_sum,
            s.c_bar_all_p,
            s.d_bar_all_p,
            s.bounds.summary(&[kind::SUM_BUCKET_CONGESTION, kind::SUM_BUCKET_POA])
        ),
    )
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "no-nash-table",
            run: no_nash_table,
        },
        Check {
            name: "no-nash-named-players",
            run: no_nash_named,
        },
        Check {
            name: "no-nash-empty-nash-set",
            run: no_nash_empty,
        },
        Check {
            name: "no-nash-cycles",
            run: no_nash_cycle,
        },
        Check {
            name: "ring8-max",
            run: ring8,
        },
        Check {
            name: "ring8-max-bounds",
            run: ring8_bounds,
        },
        Check {
            name: "random-max",
            run: random_max,
        },
        Check {
            name: "random-sum-bucket",
            run: random_sum_bucket,
        },
        Check {
            name: "dense-max",
            run: dense_max,
        },
        Check {
            name: "dense-sum-bucket",
            run: dense_sum_bucket,
        },
        Check {
            name: "bucket-tight",
            run: bucket_tight,
        },
    ]
}

/// Runs every check whose name contains `filter`.
pub fn run_checks(filter: Option<&str>) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| c.name.contains(f)))
        .map(|c| {
            let t = Instant::now();
            let (passed, detail) = match (c.run)() {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                name: c.name,
                passed,
                detail,
                elapsed: t.elapsed(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_implied_sets() {
        assert_eq!(table_unhappy([0, 0, 0]), vec![0]);
        assert_eq!(table_unhappy([1, 0, 0]), vec![1, 2]);
        assert_eq!(table_unhappy([0, 1, 1]), vec![1, 2]);
    }

    #[test]
    fn filter_selects_no_nash_only() {
        let names: Vec<_> = checks()
            .into_iter()
            .filter(|c| c.name.contains("no-nash"))
            .map(|c| c.name)
            .collect();
        assert_eq!(names.len(), 4);
    }

    #[test]
    fn battery_specs_respect_limits() {
        for k in 0..50 {
            let s = battery_spec(BATTERY_SEED, k);
            assert!(s.rows * s.cols <= 25);
            assert!((2..=6).contains(&s.players));
            assert!((2..=4).contains(&s.strategies_per_player));
        }
    }
}
