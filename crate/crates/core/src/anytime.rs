//! The outer plan loop: weight schedule, per-iteration reset, INCON merge,
//! re-keying and solution publication.

use std::time::Duration;

use crate::domain::{Domain, Edge};
use crate::engine::{Episode, IterationEnd, WorkerPool};
use crate::error::PlanError;
use crate::path::Path;
use crate::search;
use crate::trace::Trace;

/// How the independence inflation follows the heuristic weight.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum EpsilonPolicy {
    #[default]
    EqualToW,
    Fixed(f64),
}

impl EpsilonPolicy {
    pub fn at(self, w: f64) -> f64 {
        match self {
            EpsilonPolicy::EqualToW => w,
            EpsilonPolicy::Fixed(eps) => eps,
        }
    }
}

/// Ordering among OPEN entries with equal keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller h, then smaller state key, then smaller action id.
    #[default]
    SmallerH,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig {
    pub w0: f64,
    pub delta_w: f64,
    pub epsilon: EpsilonPolicy,
    pub n_threads: usize,
    pub time_budget: Duration,
    pub tie_break: TieBreak,
    pub rng_seed: u64,
    /// Record the expansion log, iteration snapshots and evaluated edges.
    pub record_trace: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            w0: 50.0,
            delta_w: 0.5,
            epsilon: EpsilonPolicy::EqualToW,
            n_threads: 1,
            time_budget: Duration::MAX,
            tie_break: TieBreak::SmallerH,
            rng_seed: 0,
            record_trace: false,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.w0 >= 1.0) {
            return Err(PlanError::InvalidWeight(self.w0));
        }
        if !(self.delta_w > 0.0) {
            return Err(PlanError::InvalidDecrement(self.delta_w));
        }
        if let EpsilonPolicy::Fixed(eps) = self.epsilon {
            if !(eps >= 1.0) {
                return Err(PlanError::InvalidEpsilon(eps));
            }
        }
        if self.n_threads == 0 {
            return Err(PlanError::NoThreads);
        }
        Ok(())
    }
}

/// `w0, w0 - dw, ...` down to exactly 1. A step that would fall below 1 is
/// clamped to 1, which is always the last value.
pub fn weight_schedule(w0: f64, delta_w: f64) -> Result<Vec<f64>, PlanError> {
    if !(w0 >= 1.0) || w0 == f64::INFINITY {
        return Err(PlanError::InvalidWeight(w0));
    }
    if !(delta_w > 0.0) {
        return Err(PlanError::InvalidDecrement(delta_w));
    }
    const SNAP: f64 = 1e-9;
    let mut out = Vec::new();
    for k in 0u64.. {
        let w = w0 - k as f64 * delta_w;
        if w <= 1.0 + SNAP {
            out.push(1.0);
            break;
        }
        out.push(w);
    }
    Ok(out)
}

/// A published anytime solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionRecord<S> {
    pub path: Path<S>,
    pub cost: f64,
    pub w_at_publish: f64,
    /// `max(eps, w)` for the iteration that produced the record.
    pub bound_lambda: f64,
    pub t_since_plan_start: Duration,
    pub iteration_index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Status {
    /// The final iteration ran with `w = eps = 1`.
    ProvedOptimal,
    /// All iterations completed but the last bound exceeds one.
    Bounded(f64),
    Timeout,
    /// Some iteration exhausted the graph without reaching the goal.
    Infeasible,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlanStats {
    /// Edges popped from OPEN in each completed or interrupted iteration.
    pub expansions_per_iteration: Vec<usize>,
    pub evaluations: usize,
    pub states: usize,
    pub elapsed: Duration,
    pub threads_spawned: usize,
    /// Time from setting `terminate` until every worker had joined.
    pub shutdown_latency: Duration,
}

#[derive(Clone, Debug)]
pub struct PlanOutcome<S> {
    pub records: Vec<SolutionRecord<S>>,
    pub status: Status,
    pub stats: PlanStats,
    pub trace: Option<Trace<S>>,
}

impl<S> PlanOutcome<S> {
    pub fn best(&self) -> Option<&SolutionRecord<S>> {
        self.records.last()
    }
}

/// Anytime plan with the weight schedule from `config`.
pub fn plan<D: Domain>(
    config: &PlannerConfig,
    domain: &D,
    start: D::State,
) -> Result<PlanOutcome<D::State>, PlanError> {
    plan_with_sink(config, domain, start, &mut |_| {})
}

/// As [`plan`], delivering each record to `sink` on the coordinator thread
/// before the next iteration starts.
pub fn plan_with_sink<D: Domain>(
    config: &PlannerConfig,
    domain: &D,
    start: D::State,
    sink: &mut dyn FnMut(&SolutionRecord<D::State>),
) -> Result<PlanOutcome<D::State>, PlanError> {
    config.validate()?;
    let weights = weight_schedule(config.w0, config.delta_w)?;
    run(config, domain, start, &weights, sink)
}

/// A single improve-path call at weight `w` with bound `max(eps, w)`:
/// ePA*SE at `w = 1`, w-ePA*SE otherwise. `config.w0`/`delta_w` are ignored.
pub fn plan_fixed_weight<D: Domain>(
    config: &PlannerConfig,
    domain: &D,
    start: D::State,
    w: f64,
) -> Result<PlanOutcome<D::State>, PlanError> {
    let cfg = PlannerConfig {
        w0: w,
        ..config.clone()
    };
    cfg.validate()?;
    run(&cfg, domain, start, &[w], &mut |_| {})
}

fn run<D: Domain>(
    config: &PlannerConfig,
    domain: &D,
    start: D::State,
    weights: &[f64],
    sink: &mut dyn FnMut(&SolutionRecord<D::State>),
) -> Result<PlanOutcome<D::State>, PlanError> {
    let ep = Episode::new(
        domain,
        &start,
        config.n_threads,
        config.time_budget,
        config.record_trace,
    );
    {
        let mut sh = ep.lock();
        let s0 = sh.start;
        let n = sh.space.node(s0);
        let f = search::priority(n.g, n.h, weights[0]);
        let h = n.h;
        sh.open.push_or_update(Edge::dummy(s0), f, h);
    }

    let mut records: Vec<SolutionRecord<D::State>> = Vec::new();
    let mut stats = PlanStats::default();
    let mut iterations = Vec::new();

    let ep_ref = &ep;
    let (status, shutdown) = std::thread::scope(|scope| -> Result<_, PlanError> {
        let mut pool = WorkerPool::new(config.n_threads);
        let mut status = Status::Timeout;
        for (i, &w) in weights.iter().enumerate() {
            if ep_ref.expired() {
                status = Status::Timeout;
                break;
            }
            let eps = config.epsilon.at(w);
            if let Some(rec) = ep_ref.begin_iteration(w, eps) {
                iterations.push(rec);
            }
            let end = ep_ref.improve_path(&mut pool, scope);
            let pops = ep_ref.lock().pops;
            stats.expansions_per_iteration.push(pops);
            if let Some(rec) = iterations.last_mut() {
                rec.pops = pops;
            }
            match end {
                Err(e) => {
                    ep_ref.stop();
                    pool.shutdown();
                    return Err(e);
                }
                Ok(IterationEnd::Timeout) => {
                    status = Status::Timeout;
                    break;
                }
                Ok(IterationEnd::Finished) => {}
            }
            let incumbent = ep_ref.lock().incumbent.clone();
            let Some(inc) = incumbent else {
                status = Status::Infeasible;
                break;
            };
            let lambda = eps.max(w);
            let rec = SolutionRecord {
                path: inc.path,
                cost: inc.cost,
                w_at_publish: w,
                bound_lambda: lambda,
                t_since_plan_start: ep_ref.clock.elapsed(),
                iteration_index: i as u32,
            };
            sink(&rec);
            records.push(rec);
            status = if lambda == 1.0 {
                Status::ProvedOptimal
            } else {
                Status::Bounded(lambda)
            };
            if let Some(&next) = weights.get(i + 1) {
                ep_ref.end_iteration(next);
            }
        }
        ep_ref.stop();
        Ok((status, pool.shutdown()))
    })?;

    stats.elapsed = ep.clock.elapsed();
    stats.evaluations = ep.cache.invocations();
    stats.states = ep.registry.len();
    stats.threads_spawned = shutdown.spawned;
    stats.shutdown_latency = shutdown.latency;
    if status == Status::Infeasible {
        records.clear();
    }
    let trace = config.record_trace.then(|| {
        let mut events = std::mem::take(&mut ep.lock().log);
        events.extend(shutdown.events);
        events.sort_by_key(|e| (e.t_ns, e.worker));
        Trace {
            events,
            iterations,
            states: ep.registry.states_from(0),
            edges: ep.cache.entries(),
        }
    });
    Ok(PlanOutcome {
        records,
        status,
        stats,
        trace,
    })
}
