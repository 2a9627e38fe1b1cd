use std::time::Duration;

use aepase_bench::metrics::cost_eq;
use aepase_bench::{run_experiment, Algorithm, MapSource, OracleCache, RunSpec, RunStatus};
use aepase_core::PlannerConfig;
use aepase_grid::{CostKind, GridDomainConfig};

fn spec(algorithm: Algorithm, cost: CostKind) -> RunSpec {
    RunSpec {
        algorithm,
        map: MapSource::Fixture("rooms64".into()),
        cost,
        cost_seed: 3,
        planner: PlannerConfig::default(),
        weight: 1.0,
        grid: GridDomainConfig {
            footprint_side: 2,
            move_length: 4,
            collision_step: 1,
            eval_delay: Duration::ZERO,
        },
        pairs: 4,
        pair_seed: 9,
        repetitions: 1,
    }
}

#[test]
fn single_shot_optimal_has_equal_times() {
    let mut oracle = OracleCache::new();
    for algo in [Algorithm::Epase, Algorithm::Wastar] {
        for r in run_experiment(&spec(algo, CostKind::RandomFactor), &mut oracle).unwrap() {
            assert_eq!(r.status, RunStatus::ProvedOptimal);
            assert_eq!(r.t_init_ms, r.t_opt_ms);
            assert_eq!(r.t_opt_ms, r.t_term_ms);
            assert!(cost_eq(r.cost_final.unwrap(), r.optimal_cost));
        }
    }
    // Pairs are shared, so the oracle was computed once per pair.
    assert_eq!(oracle.len(), 4);
}

#[test]
fn anytime_with_unit_start_weight_looks_like_epase() {
    let mut oracle = OracleCache::new();
    let mut s = spec(Algorithm::Aepase, CostKind::Euclidean);
    s.planner.w0 = 1.0;
    for r in run_experiment(&s, &mut oracle).unwrap() {
        assert_eq!(r.published_costs.len(), 1);
        assert_eq!(r.expansions_per_iteration.len(), 1);
        assert_eq!((r.t_init_ms, r.t_opt_ms), (r.t_term_ms, r.t_term_ms));
    }
}

#[test]
fn serial_runs_are_reproducible() {
    let mut oracle = OracleCache::new();
    for algo in [
        Algorithm::Aepase,
        Algorithm::Arastar,
        Algorithm::AepaseNaive,
    ] {
        let mut s = spec(algo, CostKind::RandomFactor);
        s.planner.w0 = 5.0;
        let a = run_experiment(&s, &mut oracle).unwrap();
        let b = run_experiment(&s, &mut oracle).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let bits = |r: &aepase_bench::RunMetrics| {
                r.published_costs
                    .iter()
                    .map(|c| c.to_bits())
                    .collect::<Vec<_>>()
            };
            assert_eq!(bits(x), bits(y), "{algo}");
        }
    }
}

#[test]
fn naive_and_reusing_anytime_share_the_first_solution() {
    let mut oracle = OracleCache::new();
    let mut a = spec(Algorithm::Aepase, CostKind::RandomFactor);
    a.planner.w0 = 4.0;
    let mut n = a.clone();
    n.algorithm = Algorithm::AepaseNaive;
    let (ra, rn) = (
        run_experiment(&a, &mut oracle).unwrap(),
        run_experiment(&n, &mut oracle).unwrap(),
    );
    for (x, y) in ra.iter().zip(&rn) {
        assert_eq!(
            x.published_costs[0].to_bits(),
            y.published_costs[0].to_bits()
        );
        assert_eq!(x.published_costs.len(), y.published_costs.len());
        assert_eq!(y.status, RunStatus::ProvedOptimal);
        assert!(cost_eq(*y.published_costs.last().unwrap(), y.optimal_cost));
        // Without reuse the later searches repeat work.
        let total = |r: &aepase_bench::RunMetrics| r.expansions_per_iteration.iter().sum::<usize>();
        assert!(total(y) >= total(x));
    }
}

#[test]
fn timeouts_are_recorded_not_fatal() {
    let mut oracle = OracleCache::new();
    let mut s = spec(Algorithm::Aepase, CostKind::Euclidean);
    s.planner.time_budget = Duration::ZERO;
    let runs = run_experiment(&s, &mut oracle).unwrap();
    assert_eq!(runs.len(), 4);
    assert!(runs
        .iter()
        .all(|r| r.status == RunStatus::Timeout && r.t_init_ms.is_none()));
}
