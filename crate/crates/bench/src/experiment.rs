//! Running one spec cell: sample pairs, solve each with the chosen
//! algorithm, and reduce the published records to [`RunMetrics`].

use std::sync::Arc;
use std::time::{Duration, Instant};

use aepase_core::baselines::{ara_star, weighted_astar};
use aepase_core::{
    plan, plan_fixed_weight, weight_schedule, PlanError, PlanOutcome, PlannerConfig,
};
use aepase_grid::{sample_start_goal_pairs, CostModel, GridDomain, GridState, SampleError};
use thiserror::Error;

use crate::metrics::{derive, RunMetrics, RunStatus};
use crate::oracle::OracleCache;
use crate::spec::{Algorithm, RunSpec};

/// Setup failures that prevent a whole cell from running.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("map: {0}")]
    Map(String),
    #[error("sampling: {0}")]
    Sampling(#[from] SampleError),
    #[error("domain: {0}")]
    Domain(#[from] aepase_grid::GridError),
}

/// Published records of one episode as `(t_ms, cost)`, plus bookkeeping.
#[derive(Clone, Debug)]
pub struct Solved {
    pub records: Vec<(f64, f64)>,
    pub status: RunStatus,
    pub expansions: Vec<usize>,
    pub elapsed: Duration,
    pub shutdown: Duration,
    pub error: Option<String>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn from_outcome(out: Result<PlanOutcome<GridState>, PlanError>) -> Solved {
    match out {
        Ok(o) => Solved {
            records: o
                .records
                .iter()
                .map(|r| (ms(r.t_since_plan_start), r.cost))
                .collect(),
            status: o.status.into(),
            expansions: o.stats.expansions_per_iteration,
            elapsed: o.stats.elapsed,
            shutdown: o.stats.shutdown_latency,
            error: None,
        },
        Err(e) => Solved {
            records: Vec::new(),
            status: RunStatus::Error,
            expansions: Vec::new(),
            elapsed: Duration::ZERO,
            shutdown: Duration::ZERO,
            error: Some(e.to_string()),
        },
    }
}

/// w-ePA*SE from scratch at every weight of the schedule, sharing one budget.
fn naive(config: &PlannerConfig, domain: &GridDomain, start: GridState) -> Solved {
    let t0 = Instant::now();
    let mut ep = Solved {
        records: Vec::new(),
        status: RunStatus::ProvedOptimal,
        expansions: Vec::new(),
        elapsed: Duration::ZERO,
        shutdown: Duration::ZERO,
        error: None,
    };
    let weights = match weight_schedule(config.w0, config.delta_w) {
        Ok(w) => w,
        Err(e) => {
            ep.status = RunStatus::Error;
            ep.error = Some(e.to_string());
            return ep;
        }
    };
    for (i, &w) in weights.iter().enumerate() {
        let spent = t0.elapsed();
        let Some(left) = config
            .time_budget
            .checked_sub(spent)
            .filter(|d| !d.is_zero())
        else {
            ep.status = RunStatus::Timeout;
            break;
        };
        let cfg = PlannerConfig {
            time_budget: left,
            ..config.clone()
        };
        let sub = from_outcome(plan_fixed_weight(&cfg, domain, start, w));
        ep.expansions.extend(&sub.expansions);
        ep.shutdown = ep.shutdown.max(sub.shutdown);
        ep.records
            .extend(sub.records.iter().map(|&(t, c)| (ms(spent) + t, c)));
        match sub.status {
            RunStatus::ProvedOptimal | RunStatus::Bounded => {
                if i + 1 < weights.len() {
                    ep.status = RunStatus::Bounded;
                } else {
                    ep.status = if config.epsilon.at(w) == 1.0 {
                        RunStatus::ProvedOptimal
                    } else {
                        RunStatus::Bounded
                    };
                }
            }
            other => {
                ep.status = other;
                ep.error = sub.error;
                break;
            }
        }
    }
    ep.elapsed = t0.elapsed();
    ep
}

/// Solve one instance with `spec.algorithm`.
pub fn solve(spec: &RunSpec, domain: &GridDomain, start: GridState) -> Solved {
    let cfg = &spec.planner;
    match spec.algorithm {
        Algorithm::Wastar => {
            from_outcome(weighted_astar(domain, start, spec.weight, cfg.time_budget))
        }
        Algorithm::Arastar => from_outcome(ara_star(cfg, domain, start)),
        Algorithm::Epase => from_outcome(plan_fixed_weight(cfg, domain, start, spec.weight)),
        Algorithm::Aepase => from_outcome(plan(cfg, domain, start)),
        Algorithm::AepaseNaive => naive(cfg, domain, start),
    }
}

/// The sampled instances of a spec cell as `(domain with goal, start)`.
pub fn instances(spec: &RunSpec) -> Result<Vec<(GridDomain, GridState)>, ExperimentError> {
    let map = Arc::new(spec.map.load().map_err(ExperimentError::Map)?);
    let pairs = sample_start_goal_pairs(&map, &spec.grid, spec.pairs, spec.pair_seed)?;
    let cost = Arc::new(CostModel::new(
        spec.cost,
        spec.cost_seed,
        map.width,
        map.height,
    ));
    let base = GridDomain::new(map, cost, spec.grid.clone())?;
    Ok(pairs
        .into_iter()
        .map(|(s, g)| (base.with_goal(g), s))
        .collect())
}

/// Fill `oracle` for every instance of `spec` without running a planner.
pub fn precompute_oracle(
    spec: &RunSpec,
    oracle: &mut OracleCache,
) -> Result<usize, ExperimentError> {
    let name = spec.map.name();
    let insts = instances(spec)?;
    for (domain, start) in &insts {
        oracle.cost(&name, domain, *start);
    }
    Ok(insts.len())
}

/// One [`RunMetrics`] per (pair, repetition). Runs execute one at a time.
pub fn run_experiment(
    spec: &RunSpec,
    oracle: &mut OracleCache,
) -> Result<Vec<RunMetrics>, ExperimentError> {
    let name = spec.map.name();
    let mut out = Vec::new();
    for (pair, (domain, start)) in instances(spec)?.into_iter().enumerate() {
        let goal = domain.goal.expect("instances carry a goal");
        let optimal = oracle.cost(&name, &domain, start);
        for repetition in 0..spec.repetitions {
            let run = solve(spec, &domain, start);
            let d = derive(
                &run.records,
                optimal,
                run.status == RunStatus::ProvedOptimal,
            );
            out.push(RunMetrics {
                algorithm: spec.algorithm,
                map: name.clone(),
                cost_model: spec.cost.as_str().to_string(),
                threads: if spec.algorithm.is_serial() {
                    1
                } else {
                    spec.planner.n_threads
                },
                eval_delay_us: spec.grid.eval_delay.as_micros() as u64,
                pair,
                repetition,
                start: (start.x, start.y),
                goal: (goal.x, goal.y),
                optimal_cost: optimal,
                t_init_ms: d.t_init_ms,
                t_opt_ms: d.t_opt_ms,
                t_term_ms: d.t_term_ms,
                cost_init: d.cost_init,
                cost_final: d.cost_final,
                optimality_ratio_series: d.ratios,
                published_costs: run.records.iter().map(|r| r.1).collect(),
                expansions_per_iteration: run.expansions,
                status: run.status,
                elapsed_ms: ms(run.elapsed),
                shutdown_latency_ms: ms(run.shutdown),
                error: run.error,
            });
        }
    }
    Ok(out)
}
