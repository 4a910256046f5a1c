mod common;

use proptest::prelude::*;
use routegames::cost::{CongestionProfile, RoutingState};
use routegames::dynamics::{best_response_step, random_start, run_dynamics, routing_vector, StepState};
use routegames::equilibria::{analyze, enumerate_profiles, is_nash};
use routegames::instances::{gen_random_grid, parse_instance, serialize_instance, GridSpec};
use routegames::{validate_instance, CostModel, Fraction, Instance, MovePolicy, Outcome, PathChoice, PlayerOrder};

fn grid_spec() -> impl Strategy<Value = GridSpec> {
    (2usize..=4, 2usize..=4, 1usize..=5, 1usize..=4, any::<u64>()).prop_map(|(rows, cols, players, k, seed)| GridSpec {
        rows,
        cols,
        players,
        strategies_per_player: k,
        seed,
    })
}

fn instance() -> impl Strategy<Value = Instance> {
    grid_spec().prop_map(|s| gen_random_grid(&s).unwrap())
}

fn policy() -> impl Strategy<Value = MovePolicy> {
    (
        prop_oneof![
            Just(PlayerOrder::RoundRobin),
            Just(PlayerOrder::LowestIndexFirst),
            Just(PlayerOrder::RandomSeeded)
        ],
        prop_oneof![
            Just(PathChoice::FirstImprovement),
            Just(PathChoice::BestImprovement),
            Just(PathChoice::RandomImprovement)
        ],
    )
        .prop_map(|(o, c)| MovePolicy::new(o, c))
}

fn potential_model() -> impl Strategy<Value = CostModel> {
    prop_oneof![Just(CostModel::Max), Just(CostModel::SumBucket)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_validate_and_round_trip(inst in instance()) {
        prop_assert!(validate_instance(&inst).is_empty());
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn congestion_bounds(inst in instance(), seed in any::<u64>()) {
        let r = random_start(&inst, seed);
        let prof = CongestionProfile::new(&inst, &r).unwrap();
        let st = RoutingState::new(&inst, r.clone()).unwrap();
        let n = inst.player_count() as u64;
        for e in 0..inst.edge_count() {
            let recount = (0..inst.player_count()).filter(|&i| inst.chosen(&r, i).contains(e)).count() as u64;
            prop_assert_eq!(prof.total(e), recount);
            prop_assert!(prof.total(e) <= n);
            for k in 0..prof.bucket_count() {
                prop_assert!(prof.in_bucket(e, k) <= prof.total(e));
            }
        }
        for i in 0..inst.player_count() {
            let (d, d_bar) = (st.length(i), st.normalized_length(i));
            prop_assert!(d <= d_bar && d_bar <= 2 * d);
            prop_assert!(st.normalized_congestion(i) <= st.congestion(i));
            let (mx, sm) = (st.player_cost(CostModel::Max, i), st.player_cost(CostModel::Sum, i));
            prop_assert!(mx <= sm && sm <= 2 * mx);
        }
        // per-edge maximum against per-player maximum
        let by_edge = prof.max_total().max(st.social_parts(CostModel::Max).1);
        let by_player = (0..inst.player_count()).map(|i| st.player_cost(CostModel::Max, i)).max().unwrap();
        prop_assert_eq!(st.social_cost(CostModel::Max), by_player);
        prop_assert_eq!(by_edge, by_player);
        for model in CostModel::ALL {
            prop_assert_eq!(st.social_cost(model), common::social_cost(model, &inst, &r));
        }
    }

    #[test]
    fn steps_decrease_the_potential(
        inst in instance(),
        model in potential_model(),
        policy in policy(),
        seed in any::<u64>(),
    ) {
        let mut r = random_start(&inst, seed);
        let mut state = StepState::new(seed);
        let limit = 10 * inst.strategy_counts().iter().product::<usize>();
        let mut steps = 0;
        while let Some((next, rec)) = best_response_step(model, &inst, &r, &policy, &mut state).unwrap() {
            let before = routing_vector(model, &inst, &r).unwrap();
            let after = routing_vector(model, &inst, &next).unwrap();
            prop_assert!(after.entries().iter().rev().lt(before.entries().iter().rev()));
            prop_assert!(rec.new_cost < rec.old_cost);
            r = next;
            steps += 1;
            prop_assert!(steps <= limit);
        }
        prop_assert!(is_nash(model, &inst, &r).unwrap().is_nash);
    }

    #[test]
    fn dynamics_is_deterministic(inst in instance(), model in potential_model(), policy in policy(), seed in any::<u64>()) {
        let start = random_start(&inst, seed);
        let a = run_dynamics(model, &inst, &start, &policy, seed, 10_000).unwrap();
        let b = run_dynamics(model, &inst, &start, &policy, seed, 10_000).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        prop_assert_eq!(ca, cb);
        prop_assert_eq!(&a, &b);
        let converged = matches!(a.outcome, Outcome::Converged { .. });
        prop_assert!(converged);
    }

    #[test]
    fn nash_set_agrees_with_steps(inst in instance(), model in potential_model()) {
        let a = analyze(model, &inst, 100_000, 1).unwrap();
        for r in &a.nash {
            let mut state = StepState::new(0);
            prop_assert!(best_response_step(model, &inst, r, &MovePolicy::default(), &mut state).unwrap().is_none());
        }
        let total: u64 = enumerate_profiles(&inst, 100_000).unwrap().count() as u64;
        prop_assert_eq!(total, a.report.profiles);
        if model == CostModel::Max {
            prop_assert_eq!(a.report.best_nash_sc, Some(a.report.optimal_sc));
        }
    }

    #[test]
    fn analysis_ignores_job_count(inst in instance(), jobs in 2usize..6) {
        for model in CostModel::ALL {
            let one = analyze(model, &inst, 100_000, 1).unwrap();
            let many = analyze(model, &inst, 100_000, jobs).unwrap();
            prop_assert_eq!(one.report, many.report);
            prop_assert_eq!(one.nash, many.nash);
        }
    }

    #[test]
    fn fraction_text_round_trips(n in 0u64..10_000, d in 1u64..10_000) {
        let f = Fraction::new(n, d);
        prop_assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
    }
}
