//! The acceptance suite: one pass/fail verdict per criterion, shared by
//! `aepase-bench selftest` and the `acceptance` test target.
//!
//! Criteria 1 to 6 drive the planners directly on a fixed instance set;
//! criteria 7 to 10 go through the experiment harness.

use std::sync::Arc;
use std::time::{Duration, Instant};

use aepase_core::baselines::ara_star;
use aepase_core::trace::AuditReport;
use aepase_core::{
    plan, plan_fixed_weight, Domain, EpsilonPolicy, Outcome, PlanOutcome, PlanStats, PlannerConfig,
    Status,
};
use aepase_grid::collision::{collision_free, sweep_oracle};
use aepase_grid::{
    fixtures, sample_start_goal_pairs, CostKind, CostModel, GridDomain, GridDomainConfig, GridMap,
    GridState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregate::aggregate;
use crate::experiment::run_experiment;
use crate::metrics::{cost_eq, RunMetrics, RunStatus, COST_RTOL};
use crate::oracle::OracleCache;
use crate::spec::{Algorithm, MapSource, RunSpec};

pub const MAPS: [&str; 2] = ["open64", "maze128"];
pub const COST_MODELS: [CostKind; 2] = [CostKind::Euclidean, CostKind::RandomFactor];
pub const PAIRS_PER_MAP: usize = 50;
pub const PAIR_SEED: u64 = 1;
pub const COST_SEED: u64 = 1;
pub const THREAD_COUNTS: [usize; 4] = [1, 2, 4, 8];
pub const BOUNDED_WEIGHTS: [f64; 3] = [1.5, 3.0, 50.0];
pub const ANYTIME_THREADS: [usize; 2] = [1, 4];
pub const SERIAL_INSTANCES: usize = 20;
pub const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(120);
pub const SPEEDUP_DELAY: Duration = Duration::from_millis(2);
pub const SPEEDUP_PAIRS: usize = 4;
pub const SPEEDUP_MIN: f64 = 3.0;
pub const SPEEDUP_BUDGET: Duration = Duration::from_secs(300);
pub const HARNESS_THREADS: usize = 8;
pub const HARNESS_DELAY_US: u64 = 100;
pub const HARNESS_PAIRS: usize = 6;
pub const INIT_RATIO_MIN: f64 = 0.80;
pub const COLLISION_CASES: usize = 1000;
pub const SHUTDOWN_MAX: Duration = Duration::from_millis(50);
/// Slack for `h(s) <= c(s, s') + h(s')` on floating-point Euclidean terms.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Footprint 2, moves of 4 cells, 1-cell collision steps.
pub fn desk_grid() -> GridDomainConfig {
    GridDomainConfig {
        footprint_side: 2,
        move_length: 4,
        collision_step: 1,
        eval_delay: Duration::ZERO,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "{} [{:02}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

struct Instance {
    map: &'static str,
    cost: CostKind,
    pair: usize,
    domain: GridDomain,
    start: GridState,
    optimal: f64,
}

impl Instance {
    fn label(&self) -> String {
        format!("{}/{}/pair{}", self.map, self.cost.as_str(), self.pair)
    }
}

/// Per anytime run facts reused by later criteria.
struct AnytimeRun {
    costs: Vec<f64>,
    init_ratio: Option<f64>,
}

#[derive(Default)]
struct Suite {
    instances: Vec<Instance>,
    max_shutdown: Duration,
    plans: usize,
    over_spawned: usize,
    consistency_edges: usize,
    consistency_violations: Vec<String>,
    audits: Vec<(String, AuditReport)>,
    /// Indexed like `instances`: A-ePA*SE at one thread, then ARA*.
    serial_aepase: Vec<AnytimeRun>,
    serial_ara: Vec<AnytimeRun>,
    harness_runs: Vec<RunMetrics>,
    harness_errors: Vec<String>,
}

fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut oracle = OracleCache::new();
    for map_name in MAPS {
        let map =
            Arc::new(GridMap::parse_named(map_name, fixtures::by_name(map_name).unwrap()).unwrap());
        let pairs = sample_start_goal_pairs(&map, &desk_grid(), PAIRS_PER_MAP, PAIR_SEED)
            .expect("fixture pairs");
        for cost in COST_MODELS {
            let model = Arc::new(CostModel::new(cost, COST_SEED, map.width, map.height));
            let base = GridDomain::new(map.clone(), model, desk_grid()).unwrap();
            for (pair, &(start, goal)) in pairs.iter().enumerate() {
                let domain = base.with_goal(goal);
                let optimal = oracle.cost(map_name, &domain, start);
                out.push(Instance {
                    map: map_name,
                    cost,
                    pair,
                    domain,
                    start,
                    optimal,
                });
            }
        }
    }
    out
}

fn within(cost: f64, bound: f64, optimal: f64) -> bool {
    cost <= bound * optimal * (1.0 + COST_RTOL)
}

fn published(o: &PlanOutcome<GridState>) -> Vec<f64> {
    o.records.iter().map(|r| r.cost).collect()
}

impl Suite {
    fn note(&mut self, stats: &PlanStats, n_threads: usize) {
        self.plans += 1;
        self.max_shutdown = self.max_shutdown.max(stats.shutdown_latency);
        if stats.threads_spawned > n_threads {
            self.over_spawned += 1;
        }
    }

    fn check_consistency(&mut self, inst: &Instance, o: &PlanOutcome<GridState>) {
        let Some(trace) = &o.trace else { return };
        let d = &inst.domain;
        for (edge, outcome) in &trace.edges {
            if let Outcome::Valid { successor, cost } = outcome {
                let s = &trace.states[edge.state.index()];
                let t = &trace.states[successor.index()];
                self.consistency_edges += 1;
                let (hs, ht) = (d.heuristic(s), d.heuristic(t));
                if hs > cost + ht + CONSISTENCY_TOL * cost.max(1.0) {
                    self.consistency_violations.push(format!(
                        "{}: {s} -> {t}: h {hs} > {cost} + {ht}",
                        inst.label()
                    ));
                }
            }
        }
    }

    fn optimal_equivalence(&mut self) -> Verdict {
        let t0 = Instant::now();
        self.instances = instances();
        let insts = std::mem::take(&mut self.instances);
        let mut mismatches = Vec::new();
        let mut runs = 0;
        for inst in &insts {
            for n_threads in THREAD_COUNTS {
                let cfg = PlannerConfig {
                    w0: 1.0,
                    n_threads,
                    epsilon: EpsilonPolicy::Fixed(1.0),
                    record_trace: true,
                    ..PlannerConfig::default()
                };
                for (algo, out) in [
                    (
                        "epase",
                        plan_fixed_weight(&cfg, &inst.domain, inst.start, 1.0),
                    ),
                    ("aepase", plan(&cfg, &inst.domain, inst.start)),
                ] {
                    runs += 1;
                    let o = out.expect("valid config");
                    self.note(&o.stats, n_threads);
                    self.check_consistency(inst, &o);
                    let cost = o.best().map(|r| r.cost).unwrap_or(f64::INFINITY);
                    if o.status != Status::ProvedOptimal || !cost_eq(cost, inst.optimal) {
                        mismatches.push(format!(
                            "{} {algo} N_t={n_threads}: {cost} vs {}",
                            inst.label(),
                            inst.optimal
                        ));
                    }
                }
            }
        }
        self.instances = insts;
        let elapsed = t0.elapsed();
        Verdict {
            id: 1,
            name: "optimal equivalence",
            passed: mismatches.is_empty()
                && elapsed < EQUIVALENCE_BUDGET
                && self.instances.len() >= 200,
            detail: format!(
                "{} instances, {runs} runs over N_t {:?}, {} mismatches{}, {:.1}s (budget {}s)",
                self.instances.len(),
                THREAD_COUNTS,
                mismatches.len(),
                first(&mismatches),
                elapsed.as_secs_f64(),
                EQUIVALENCE_BUDGET.as_secs()
            ),
        }
    }

    fn bounded_suboptimality(&mut self) -> Verdict {
        let insts = std::mem::take(&mut self.instances);
        let mut violations = Vec::new();
        let mut runs = 0;
        let mut worst: f64 = 1.0;
        for inst in &insts {
            for w in BOUNDED_WEIGHTS {
                for n_threads in ANYTIME_THREADS {
                    let cfg = PlannerConfig {
                        n_threads,
                        ..PlannerConfig::default()
                    };
                    let o =
                        plan_fixed_weight(&cfg, &inst.domain, inst.start, w).expect("valid config");
                    self.note(&o.stats, n_threads);
                    runs += 1;
                    match o.best() {
                        Some(r) if within(r.cost, w, inst.optimal) => {
                            worst = worst.max(r.cost / inst.optimal)
                        }
                        other => violations.push(format!(
                            "{} w={w} N_t={n_threads}: {:?} vs {}",
                            inst.label(),
                            other.map(|r| r.cost),
                            inst.optimal
                        )),
                    }
                }
            }
        }
        self.instances = insts;
        Verdict {
            id: 2,
            name: "bounded suboptimality",
            passed: violations.is_empty(),
            detail: format!(
                "{runs} runs, w = eps in {:?}, N_t {:?}, worst cost/optimal {worst:.4}, {} violations{}",
                BOUNDED_WEIGHTS,
                ANYTIME_THREADS,
                violations.len(),
                first(&violations)
            ),
        }
    }

    fn anytime_correctness(&mut self) -> Verdict {
        let insts = std::mem::take(&mut self.instances);
        let mut problems = Vec::new();
        let mut records = 0;
        let mut check = |label: String,
                         o: &PlanOutcome<GridState>,
                         optimal: f64,
                         problems: &mut Vec<String>| {
            records += o.records.len();
            for r in &o.records {
                if !within(r.cost, r.bound_lambda, optimal) {
                    problems.push(format!(
                        "{label}: record {} cost {} > {} x {optimal}",
                        r.iteration_index, r.cost, r.bound_lambda
                    ));
                }
            }
            if o.records.windows(2).any(|p| p[1].cost > p[0].cost) {
                problems.push(format!("{label}: costs increase {:?}", published(o)));
            }
            let final_cost = o.best().map(|r| r.cost).unwrap_or(f64::INFINITY);
            if o.status != Status::ProvedOptimal || !cost_eq(final_cost, optimal) {
                problems.push(format!(
                    "{label}: status {:?}, final {final_cost} vs {optimal}",
                    o.status
                ));
            }
        };
        for inst in &insts {
            for n_threads in ANYTIME_THREADS {
                let cfg = PlannerConfig {
                    n_threads,
                    record_trace: true,
                    ..PlannerConfig::default()
                };
                let o = plan(&cfg, &inst.domain, inst.start).expect("valid config");
                self.note(&o.stats, n_threads);
                check(
                    format!("{} aepase N_t={n_threads}", inst.label()),
                    &o,
                    inst.optimal,
                    &mut problems,
                );
                if let Some(t) = &o.trace {
                    self.audits
                        .push((format!("{} N_t={n_threads}", inst.label()), t.audit()));
                }
                if n_threads == 1 {
                    self.serial_aepase.push(AnytimeRun {
                        costs: published(&o),
                        init_ratio: o.records.first().map(|r| inst.optimal / r.cost),
                    });
                }
            }
            let cfg = PlannerConfig::default();
            let o = ara_star(&cfg, &inst.domain, inst.start).expect("valid config");
            self.note(&o.stats, 1);
            check(
                format!("{} arastar", inst.label()),
                &o,
                inst.optimal,
                &mut problems,
            );
            self.serial_ara.push(AnytimeRun {
                costs: published(&o),
                init_ratio: o.records.first().map(|r| inst.optimal / r.cost),
            });
        }
        self.instances = insts;
        Verdict {
            id: 3,
            name: "anytime correctness",
            passed: problems.is_empty(),
            detail: format!(
                "{} instances, A-ePA*SE N_t {:?} and ARA* at w0=50 dw=0.5, {records} records, {} problems{}",
                self.instances.len(),
                ANYTIME_THREADS,
                problems.len(),
                first(&problems)
            ),
        }
    }

    fn anytime_efficiency(&self) -> Verdict {
        let bad: Vec<String> = self
            .audits
            .iter()
            .filter(|(_, a)| !a.efficiency_violations.is_empty())
            .map(|(l, a)| {
                format!(
                    "{l}: {:?}",
                    &a.efficiency_violations[..a.efficiency_violations.len().min(3)]
                )
            })
            .collect();
        let total: usize = self
            .audits
            .iter()
            .map(|(_, a)| a.efficiency_violations.len())
            .sum();
        let expansions: usize = self.audits.iter().map(|(_, a)| a.dummy_expansions).sum();
        Verdict {
            id: 4,
            name: "anytime efficiency",
            passed: total == 0 && !self.audits.is_empty(),
            detail: format!(
                "{} traced runs, {expansions} state expansions, {total} expansions of states neither inconsistent at iteration start nor lowered in the iteration{}",
                self.audits.len(),
                first(&bad)
            ),
        }
    }

    fn at_most_once(&self) -> Verdict {
        let dummy: usize = self
            .audits
            .iter()
            .map(|(_, a)| a.duplicate_dummy.len())
            .sum();
        let real: usize = self
            .audits
            .iter()
            .map(|(_, a)| a.duplicate_real.len())
            .sum();
        Verdict {
            id: 5,
            name: "at-most-once expansion",
            passed: dummy == 0 && real == 0 && !self.audits.is_empty(),
            detail: format!(
                "{} traced runs, {dummy} repeated dummy-edge expansions, {real} repeated real-edge evaluations within an iteration",
                self.audits.len()
            ),
        }
    }

    fn serial_reduction(&mut self) -> Verdict {
        // The first SERIAL_INSTANCES / 4 pairs of every (map, cost model).
        let per_group = SERIAL_INSTANCES / (MAPS.len() * COST_MODELS.len());
        let chosen: Vec<usize> = (0..self.instances.len())
            .filter(|&i| self.instances[i].pair < per_group)
            .collect();
        let same = |a: &[f64], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| cost_eq(*x, *y))
        };
        let mut diverged = Vec::new();
        let mut first_differs = 0;
        for &i in &chosen {
            let (a, b) = (&self.serial_aepase[i].costs, &self.serial_ara[i].costs);
            if !same(a, b) {
                if a.first()
                    .zip(b.first())
                    .is_some_and(|(x, y)| !cost_eq(*x, *y))
                {
                    first_differs += 1;
                }
                let k = a
                    .iter()
                    .zip(b)
                    .position(|(x, y)| !cost_eq(*x, *y))
                    .unwrap_or(a.len().min(b.len()));
                diverged.push(format!(
                    "{}: first difference at record {k} ({:?} vs {:?})",
                    self.instances[i].label(),
                    a.get(k),
                    b.get(k)
                ));
            }
        }
        // Same comparison at a low starting weight, for the report.
        let mut low_same = 0;
        for &i in &chosen {
            let inst = &self.instances[i];
            let cfg = PlannerConfig {
                w0: 1.5,
                ..PlannerConfig::default()
            };
            let a = plan(&cfg, &inst.domain, inst.start).expect("valid config");
            let b = ara_star(&cfg, &inst.domain, inst.start).expect("valid config");
            self.note(&a.stats, 1);
            low_same += same(&published(&a), &published(&b)) as usize;
        }
        Verdict {
            id: 6,
            name: "serial reduction",
            passed: diverged.is_empty() && chosen.len() == SERIAL_INSTANCES,
            detail: format!(
                "A-ePA*SE N_t=1 vs ARA*, w0=50 dw=0.5: {}/{} identical published-cost sequences, {first_differs} differ from the first record{}; with w0=1.5: {low_same}/{}",
                chosen.len() - diverged.len(),
                chosen.len(),
                first(&diverged),
                chosen.len()
            ),
        }
    }

    fn harness(&mut self, spec: &RunSpec, oracle: &mut OracleCache) -> Vec<RunMetrics> {
        match run_experiment(spec, oracle) {
            Ok(runs) => {
                for r in &runs {
                    self.plans += 1;
                    self.max_shutdown = self
                        .max_shutdown
                        .max(Duration::from_secs_f64(r.shutdown_latency_ms / 1e3));
                    if let Some(e) = &r.error {
                        self.harness_errors.push(e.clone());
                    }
                }
                self.harness_runs.extend(runs.iter().cloned());
                runs
            }
            Err(e) => {
                self.harness_errors.push(e.to_string());
                Vec::new()
            }
        }
    }

    fn parallel_speedup(&mut self, oracle: &mut OracleCache) -> Verdict {
        let t0 = Instant::now();
        let mut by_threads = Vec::new();
        for n_threads in [1, 8] {
            let spec = RunSpec {
                planner: PlannerConfig {
                    n_threads,
                    ..PlannerConfig::default()
                },
                grid: GridDomainConfig {
                    eval_delay: SPEEDUP_DELAY,
                    ..desk_grid()
                },
                pairs: SPEEDUP_PAIRS,
                ..spec(Algorithm::Epase, "maze128", CostKind::Euclidean)
            };
            by_threads.push(self.harness(&spec, oracle));
        }
        let elapsed = t0.elapsed();
        let ratios: Vec<f64> = by_threads[0]
            .iter()
            .zip(&by_threads[1])
            .filter_map(|(a, b)| Some(a.t_term_ms? / b.t_term_ms?))
            .collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
        Verdict {
            id: 7,
            name: "parallel speedup",
            passed: ratios.len() == SPEEDUP_PAIRS && mean >= SPEEDUP_MIN && elapsed < SPEEDUP_BUDGET,
            detail: format!(
                "ePA*SE N_t=8 over N_t=1 on maze128, {} ms delay: mean per-run speedup {mean:.2} (min {SPEEDUP_MIN}) over {} runs {:?}, {:.1}s (budget {}s)",
                SPEEDUP_DELAY.as_millis(),
                ratios.len(),
                ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>(),
                elapsed.as_secs_f64(),
                SPEEDUP_BUDGET.as_secs()
            ),
        }
    }

    fn harness_runs_for(
        &mut self,
        algorithm: Algorithm,
        cost: CostKind,
        oracle: &mut OracleCache,
    ) -> Vec<RunMetrics> {
        let mut out = Vec::new();
        for map in MAPS {
            let spec = RunSpec {
                planner: PlannerConfig {
                    n_threads: HARNESS_THREADS,
                    ..PlannerConfig::default()
                },
                grid: GridDomainConfig {
                    eval_delay: Duration::from_micros(HARNESS_DELAY_US),
                    ..desk_grid()
                },
                pairs: HARNESS_PAIRS,
                ..spec(algorithm, map, cost)
            };
            out.extend(self.harness(&spec, oracle));
        }
        out
    }

    fn anytime_ordering(&mut self, oracle: &mut OracleCache) -> Verdict {
        let mean_of = |runs: &[RunMetrics], f: fn(&RunMetrics) -> Option<f64>| {
            let v: Vec<f64> = runs.iter().filter_map(f).collect();
            (v.len() == runs.len() && !v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        let a = self.harness_runs_for(Algorithm::Aepase, CostKind::RandomFactor, oracle);
        let e = self.harness_runs_for(Algorithm::Epase, CostKind::RandomFactor, oracle);
        let n = self.harness_runs_for(Algorithm::AepaseNaive, CostKind::RandomFactor, oracle);
        let (ai, ei) = (mean_of(&a, |r| r.t_init_ms), mean_of(&e, |r| r.t_init_ms));
        let (at, nt) = (mean_of(&a, |r| r.t_term_ms), mean_of(&n, |r| r.t_term_ms));
        let passed = matches!((ai, ei, at, nt), (Some(ai), Some(ei), Some(at), Some(nt)) if ai < ei && at < nt);
        let f = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.1}"));
        Verdict {
            id: 8,
            name: "anytime ordering",
            passed,
            detail: format!(
                "random cost, {} runs each, N_t={HARNESS_THREADS}, {HARNESS_DELAY_US} us delay: t_init A-ePA*SE {} ms < ePA*SE {} ms; t_term A-ePA*SE {} ms < A-ePA*SE-naive {} ms",
                a.len(),
                f(ai),
                f(ei),
                f(at),
                f(nt)
            ),
        }
    }

    fn initial_quality(&mut self, oracle: &mut OracleCache) -> Verdict {
        let mut means = Vec::new();
        for cost in COST_MODELS {
            // Random-cost A-ePA*SE runs already exist from the ordering check.
            let runs: Vec<RunMetrics> = match cost {
                CostKind::RandomFactor => self
                    .harness_runs
                    .iter()
                    .filter(|r| {
                        r.algorithm == Algorithm::Aepase
                            && r.cost_model == cost.as_str()
                            && r.eval_delay_us == HARNESS_DELAY_US
                    })
                    .cloned()
                    .collect(),
                CostKind::Euclidean => self.harness_runs_for(Algorithm::Aepase, cost, oracle),
            };
            let ratios: Vec<f64> = runs
                .iter()
                .filter_map(|r| r.optimality_ratio_series.first().map(|p| p.1))
                .collect();
            means.push((
                cost,
                ratios.len(),
                ratios.iter().sum::<f64>() / ratios.len().max(1) as f64,
            ));
        }
        let serial = |runs: &[AnytimeRun], insts: &[Instance], cost: CostKind| {
            let v: Vec<f64> = runs
                .iter()
                .zip(insts)
                .filter(|(_, i)| i.cost == cost)
                .filter_map(|(r, _)| r.init_ratio)
                .collect();
            v.iter().sum::<f64>() / v.len().max(1) as f64
        };
        let passed = means.iter().all(|&(_, n, m)| n > 0 && m >= INIT_RATIO_MIN);
        Verdict {
            id: 9,
            name: "initial-solution quality",
            passed,
            detail: format!(
                "A-ePA*SE at w0=50, N_t={HARNESS_THREADS}, {HARNESS_DELAY_US} us delay: {} (min {INIT_RATIO_MIN}); for reference N_t=1 without delay: A-ePA*SE euclidean {:.3} random {:.3}, ARA* euclidean {:.3} random {:.3}",
                means
                    .iter()
                    .map(|(c, n, m)| format!("{} {m:.3} over {n} runs", c.as_str()))
                    .collect::<Vec<_>>()
                    .join(", "),
                serial(&self.serial_aepase, &self.instances, CostKind::Euclidean),
                serial(&self.serial_aepase, &self.instances, CostKind::RandomFactor),
                serial(&self.serial_ara, &self.instances, CostKind::Euclidean),
                serial(&self.serial_ara, &self.instances, CostKind::RandomFactor),
            ),
        }
    }

    fn metric_sanity(&self) -> Verdict {
        let order: Vec<String> = self
            .harness_runs
            .iter()
            .filter_map(RunMetrics::order_violation)
            .collect();
        let proved = self
            .harness_runs
            .iter()
            .filter(|r| r.status == RunStatus::ProvedOptimal)
            .count();
        let (curves, decreasing) = match aggregate(&self.harness_runs) {
            Ok(s) => {
                let mut n = 0;
                let mut bad = Vec::new();
                for c in &s.curves {
                    for (v, vals) in &c.series {
                        n += 1;
                        if vals.windows(2).any(|w| w[1] < w[0]) {
                            bad.push(format!("{} {}", c.cost_model, v.label()));
                        }
                    }
                }
                (n, bad)
            }
            Err(e) => (0, vec![e.to_string()]),
        };
        Verdict {
            id: 10,
            name: "metric sanity",
            passed: order.is_empty() && decreasing.is_empty() && curves > 0 && self.harness_errors.is_empty(),
            detail: format!(
                "{} harness runs ({proved} proved optimal), {} t_init/t_opt/t_term order violations{}; {curves} anytime curves, {} decreasing{}; {} run errors{}",
                self.harness_runs.len(),
                order.len(),
                first(&order),
                decreasing.len(),
                first(&decreasing),
                self.harness_errors.len(),
                first(&self.harness_errors)
            ),
        }
    }

    fn domain_correctness(&self) -> Verdict {
        let round_trip_fail: Vec<&str> = fixtures::ALL
            .iter()
            .filter(|(name, text)| {
                GridMap::parse_named(name, text).map_or(true, |m| m.to_map_string() != *text)
            })
            .map(|(name, _)| *name)
            .collect();
        let collision_mismatch = collision_cases(COLLISION_CASES);
        let passed = round_trip_fail.is_empty()
            && collision_mismatch == 0
            && self.consistency_violations.is_empty()
            && self.consistency_edges > 0;
        Verdict {
            id: 11,
            name: "domain correctness",
            passed,
            detail: format!(
                "{}/{} fixtures round-trip byte-exactly; {collision_mismatch}/{COLLISION_CASES} collision checks disagree with the sweep oracle; {} heuristic-consistency violations over {} evaluated edges{}",
                fixtures::ALL.len() - round_trip_fail.len(),
                fixtures::ALL.len(),
                self.consistency_violations.len(),
                self.consistency_edges,
                first(&self.consistency_violations)
            ),
        }
    }

    fn shutdown_liveness(&self) -> Verdict {
        Verdict {
            id: 12,
            name: "shutdown liveness",
            passed: self.max_shutdown < SHUTDOWN_MAX && self.over_spawned == 0,
            detail: format!(
                "{} plan calls, slowest worker join {:.3} ms (max {} ms), {} calls spawned more workers than N_t",
                self.plans,
                self.max_shutdown.as_secs_f64() * 1e3,
                SHUTDOWN_MAX.as_millis(),
                self.over_spawned
            ),
        }
    }
}

fn spec(algorithm: Algorithm, map: &str, cost: CostKind) -> RunSpec {
    RunSpec {
        algorithm,
        map: MapSource::Fixture(map.to_string()),
        cost,
        cost_seed: COST_SEED,
        planner: PlannerConfig::default(),
        weight: 1.0,
        grid: desk_grid(),
        pairs: HARNESS_PAIRS,
        pair_seed: PAIR_SEED,
        repetitions: 1,
    }
}

fn first(items: &[String]) -> String {
    items
        .first()
        .map(|s| format!(" (e.g. {s})"))
        .unwrap_or_default()
}

/// Randomized footprint, segment and obstacle cases; returns disagreements.
pub fn collision_cases(n: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    for _ in 0..n {
        let (w, h) = (rng.gen_range(4..48usize), rng.gen_range(4..48usize));
        let density = rng.gen_range(0.0..0.2);
        let cells: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(density)).collect();
        let map = GridMap::from_fn("case", w, h, |x, y| cells[y * w + x]);
        let side = rng.gen_range(1..8);
        let step = rng.gen_range(1..4);
        let mut p = || {
            GridState::new(
                rng.gen_range(-2..w as i32 + 2),
                rng.gen_range(-2..h as i32 + 2),
            )
        };
        let (a, b) = (p(), p());
        if collision_free(&map, a, b, side, step) != sweep_oracle(&map, a, b, side, step) {
            mismatches += 1;
        }
    }
    mismatches
}

/// Run all criteria in order, handing each verdict to `report` as it lands.
pub fn run_all(report: &mut dyn FnMut(&Verdict)) -> Vec<Verdict> {
    let mut suite = Suite::default();
    let mut oracle = OracleCache::new();
    let mut out = Vec::new();
    let mut emit = |v: Verdict| {
        report(&v);
        out.push(v);
    };
    emit(suite.optimal_equivalence());
    emit(suite.bounded_suboptimality());
    emit(suite.anytime_correctness());
    emit(suite.anytime_efficiency());
    emit(suite.at_most_once());
    emit(suite.serial_reduction());
    emit(suite.parallel_speedup(&mut oracle));
    emit(suite.anytime_ordering(&mut oracle));
    emit(suite.initial_quality(&mut oracle));
    emit(suite.metric_sanity());
    emit(suite.domain_correctness());
    emit(suite.shutdown_liveness());
    out
}
