mod common;

use common::{classic, close, oracle, small_problem};
use hybrid_simplex::engine::{reference_run, run_simplex, EngineConfig, ExecutionMode};
use hybrid_simplex::generator::{generate_dense, GenSpec};
use hybrid_simplex::lp_core::{check_certificate, traces_identical, LpProblem, PivotRule, SimplexOptions, Status};
use hybrid_simplex::partition::LaneLayout;
use proptest::prelude::*;

fn layout_strategy() -> impl Strategy<Value = (LaneLayout, f64)> {
    (1usize..=4, prop::collection::vec(1u32..=9, 0..=3), 0u32..=10).prop_map(|(workers, caps, theta)| {
        let caps: Vec<f64> = caps.into_iter().map(|c| f64::from(c) / 10.0).collect();
        let theta = if caps.is_empty() { 0.0 } else { f64::from(theta) / 10.0 };
        (LaneLayout::with_devices(workers, &caps), theta)
    })
}

fn mode_strategy() -> impl Strategy<Value = ExecutionMode> {
    prop_oneof![Just(ExecutionMode::Serial), Just(ExecutionMode::Threaded)]
}

fn rule_strategy() -> impl Strategy<Value = PivotRule> {
    prop_oneof![Just(PivotRule::Dantzig), Just(PivotRule::Bland)]
}

/// Runs one configuration and checks it against the reference solve.
fn check_against_reference(problem: &LpProblem, layout: &LaneLayout, theta: f64, mode: ExecutionMode, rule: PivotRule) {
    let options = SimplexOptions {
        rule,
        ..SimplexOptions::default()
    };
    let (reference, _) = reference_run(problem, &options);
    let config = EngineConfig {
        options,
        mode,
        check_invariants: true,
        ..EngineConfig::from_layout(layout, theta)
    };
    let run = run_simplex(problem, &config).unwrap();
    let label = format!("{layout} theta {theta} {mode:?} {rule}");
    assert_eq!(run.solution.status, reference.status, "{label}");
    assert!(traces_identical(&run.solution.pivot_trace, &reference.pivot_trace), "{label}");
    assert_eq!(run.solution.iterations, reference.iterations, "{label}");
    assert_eq!(run.solution.objective.to_bits(), reference.objective.to_bits(), "{label}");
    if run.solution.status == Status::Optimal {
        let certificate = check_certificate(problem, run.tableau.as_ref().unwrap());
        assert!(certificate.is_valid(), "{label}: {:?}", certificate.violations);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lanes_theta_and_mode_never_change_the_trace(
        problem in small_problem(),
        (layout, theta) in layout_strategy(),
        mode in mode_strategy(),
        rule in rule_strategy(),
    ) {
        check_against_reference(&problem, &layout, theta, mode, rule);
    }

    #[test]
    fn optimum_matches_vertex_enumeration(problem in small_problem(), rule in rule_strategy()) {
        let config = EngineConfig::from_layout(&LaneLayout::with_devices(2, &[0.45, 0.55]), 0.8).with_rule(rule);
        let run = run_simplex(&problem, &config).unwrap();
        match oracle(&problem) {
            Some(best) => {
                prop_assert_eq!(run.solution.status, Status::Optimal);
                prop_assert!(close(run.solution.objective, best, 1e-6), "{} vs {}", run.solution.objective, best);
                prop_assert!(problem.max_violation(&run.solution.primal) <= 1e-6);
                prop_assert!(close(problem.objective_value(&run.solution.primal), best, 1e-6));
            }
            None => prop_assert_eq!(run.solution.status, Status::Infeasible),
        }
    }

    #[test]
    fn generated_problems_are_seed_deterministic(seed in any::<u64>(), m in 1usize..30, n in 1usize..30) {
        let a = generate_dense(&GenSpec::new(m, n, seed)).unwrap();
        let b = generate_dense(&GenSpec::new(m, n, seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn classic_lp_in_every_configuration() {
    let problem = classic();
    assert_eq!(oracle(&problem), Some(36.0));
    let layouts = [
        (LaneLayout::cpu_only(1), 0.0),
        (LaneLayout::cpu_only(4), 0.0),
        (LaneLayout::with_devices(2, &[0.45, 0.55]), 0.3),
        (LaneLayout::with_devices(2, &[0.45, 0.55]), 0.8),
        (LaneLayout::with_devices(2, &[0.45, 0.55]), 1.0),
    ];
    for (layout, theta) in &layouts {
        for mode in [ExecutionMode::Serial, ExecutionMode::Threaded] {
            check_against_reference(&problem, layout, *theta, mode, PivotRule::Dantzig);
        }
    }
}

#[test]
fn generated_instances_across_layouts() {
    let layouts = [
        (LaneLayout::cpu_only(3), 0.0),
        (LaneLayout::with_devices(1, &[0.2, 0.3, 0.5]), 0.6),
        (LaneLayout::with_devices(2, &[0.45, 0.55]), 1.0),
    ];
    for seed in 0..6 {
        let size = 8 + 9 * seed as usize;
        let problem = generate_dense(&GenSpec::new(size, size + 3, seed)).unwrap();
        for (layout, theta) in &layouts {
            check_against_reference(&problem, layout, *theta, ExecutionMode::Threaded, PivotRule::Dantzig);
        }
    }
}

#[test]
fn generator_6x6_seed_42_matches_oracle() {
    let problem = generate_dense(&GenSpec::new(6, 6, 42)).unwrap();
    let best = oracle(&problem).expect("generated problems are feasible");
    let run = run_simplex(&problem, &EngineConfig::from_layout(&LaneLayout::cpu_only(2), 0.0)).unwrap();
    assert_eq!(run.solution.status, Status::Optimal);
    assert!(close(run.solution.objective, best, 1e-9), "{} vs {best}", run.solution.objective);
}
