//! Edge-expansion engine: one coordinator runs improve-path, popping
//! independent edges and handing real edges to up to `n_threads` workers.
//! Dummy edges are expanded by the coordinator itself, so a state is in BE
//! from the moment its dummy edge leaves OPEN. All shared search state sits
//! behind a single mutex; edge evaluation is the only work done outside it.

mod worker;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Condvar, Mutex, MutexGuard};
use std::thread::Scope;
use std::time::{Duration, Instant};

use crate::domain::{Domain, Edge, EdgeCache, StateKey, StateRegistry};
use crate::error::PlanError;
use crate::path::{Path, PathStep};
use crate::search::{self, OpenQueue, SearchSpace};
use crate::trace::{EventKind, ExpansionEvent, IterationRecord, COORDINATOR};

pub(crate) use worker::WorkerPool;

/// Fallback re-check interval for the coordinator's waits.
const WAIT_SLICE: Duration = Duration::from_micros(100);

/// Best solution found so far in an episode.
#[derive(Clone, Debug)]
pub struct Incumbent<S> {
    pub goal: StateKey,
    pub path: Path<S>,
    pub cost: f64,
}

/// Search state guarded by the episode's critical section.
pub(crate) struct Shared<S> {
    pub open: OpenQueue,
    pub space: SearchSpace<S>,
    pub w: f64,
    pub eps: f64,
    pub iteration: u32,
    pub start: StateKey,
    pub incumbent: Option<Incumbent<S>>,
    /// Cost of the incumbent, +inf before the first solution.
    pub f_goal: f64,
    pub in_flight: usize,
    pub idle: Vec<bool>,
    pub pops: usize,
    /// Events logged by the coordinator when tracing.
    pub log: Vec<ExpansionEvent>,
}

pub(crate) enum IterationEnd {
    /// The termination condition was met (or OPEN and BE emptied).
    Finished,
    Timeout,
}

/// One planning episode: domain, registry, edge cache and the shared state.
pub(crate) struct Episode<'d, D: Domain> {
    pub domain: &'d D,
    pub registry: StateRegistry<D::State>,
    pub cache: EdgeCache,
    pub shared: Mutex<Shared<D::State>>,
    pub changed: Condvar,
    pub terminate: AtomicBool,
    pub clock: Instant,
    pub deadline: Option<Instant>,
    pub tracing: bool,
}

impl<'d, D: Domain> Episode<'d, D> {
    pub fn new(
        domain: &'d D,
        start: &D::State,
        n_threads: usize,
        time_budget: Duration,
        tracing: bool,
    ) -> Self {
        let clock = Instant::now();
        let registry = StateRegistry::new();
        let start_key = registry.intern(start);
        let ep = Episode {
            domain,
            registry,
            cache: EdgeCache::new(),
            shared: Mutex::new(Shared {
                open: OpenQueue::new(),
                space: SearchSpace::new(),
                w: 1.0,
                eps: 1.0,
                iteration: 0,
                start: start_key,
                incumbent: None,
                f_goal: f64::INFINITY,
                in_flight: 0,
                idle: vec![true; n_threads],
                pops: 0,
                log: Vec::new(),
            }),
            changed: Condvar::new(),
            terminate: AtomicBool::new(false),
            clock,
            deadline: clock.checked_add(time_budget),
            tracing,
        };
        {
            let mut sh = ep.lock();
            ep.sync_nodes(&mut sh);
            sh.space.node_mut(start_key).g = 0.0;
        }
        ep
    }

    pub fn lock(&self) -> MutexGuard<'_, Shared<D::State>> {
        self.shared.lock().expect("search state poisoned")
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn now_ns(&self) -> u64 {
        self.clock.elapsed().as_nanos() as u64
    }

    /// Create records for every state the registry knows but the search
    /// space does not yet.
    pub fn sync_nodes(&self, sh: &mut Shared<D::State>) {
        let have = sh.space.len();
        if have >= self.registry.len() {
            return;
        }
        for (i, state) in self.registry.states_from(have).into_iter().enumerate() {
            let h = self.domain.heuristic(&state);
            let goal = self.domain.is_goal(&state);
            sh.space.add(StateKey((have + i) as u32), state, h, goal);
        }
    }

    fn wait<'a>(
        &self,
        guard: MutexGuard<'a, Shared<D::State>>,
    ) -> MutexGuard<'a, Shared<D::State>> {
        self.changed
            .wait_timeout(guard, WAIT_SLICE)
            .expect("search state poisoned")
            .0
    }

    /// Prepare the next improve-path call at weight `w`: CLOSED emptied,
    /// partially expanded BE states returned to OPEN as dummy edges, keys
    /// recomputed. Returns the iteration snapshot when tracing.
    pub fn begin_iteration(&self, w: f64, eps: f64) -> Option<IterationRecord> {
        let mut sh = self.lock();
        let sh = &mut *sh;
        debug_assert_eq!(sh.in_flight, 0);
        sh.w = w;
        sh.eps = eps;
        sh.pops = 0;
        sh.space.clear_closed();
        for s in sh.space.drain_be() {
            for a in self.domain.actions(sh.space.state(s)) {
                sh.open.remove(&Edge::new(s, a));
            }
            let n = sh.space.node(s);
            sh.open
                .push_or_update(Edge::dummy(s), search::priority(n.g, n.h, w), n.h);
        }
        search::merge_incons(&mut sh.open, &mut sh.space, w);
        search::rebalance(&mut sh.open, w, &sh.space);
        debug_assert!(sh.space.be().is_empty() && sh.space.closed().is_empty());
        self.tracing.then(|| {
            let mut inconsistent: Vec<StateKey> = sh
                .open
                .iter()
                .filter(|e| e.edge.is_dummy())
                .map(|e| e.edge.state)
                .collect();
            inconsistent.sort();
            IterationRecord {
                index: sh.iteration,
                w,
                eps,
                inconsistent_at_start: inconsistent,
                pops: 0,
            }
        })
    }

    /// Close out an iteration: INCON merged into OPEN and OPEN re-keyed at the
    /// next weight.
    pub fn end_iteration(&self, next_w: f64) {
        let mut sh = self.lock();
        let sh = &mut *sh;
        sh.iteration += 1;
        search::merge_incons(&mut sh.open, &mut sh.space, next_w);
        search::rebalance(&mut sh.open, next_w, &sh.space);
    }

    /// The coordinator loop. Returns once the incumbent is no worse than the
    /// smallest OPEN key (or OPEN and BE are exhausted), after every in-flight
    /// expansion has completed.
    pub fn improve_path<'scope>(
        &'scope self,
        pool: &mut WorkerPool<'scope, D::State>,
        scope: &'scope Scope<'scope, '_>,
    ) -> Result<IterationEnd, PlanError>
    where
        'd: 'scope,
    {
        let mut sh = self.lock();
        let end = loop {
            if self.expired() {
                break IterationEnd::Timeout;
            }
            if sh.open.is_empty() {
                if sh.in_flight == 0 && sh.space.be().is_empty() {
                    break IterationEnd::Finished;
                }
                sh = self.wait(sh);
                continue;
            }
            if !(sh.f_goal > sh.open.min_f()) {
                // An in-flight edge may still insert a successor below f_goal.
                if sh.in_flight == 0 {
                    break IterationEnd::Finished;
                }
                sh = self.wait(sh);
                continue;
            }
            let Some(slot) = sh.idle.iter().position(|&idle| idle) else {
                sh = self.wait(sh);
                continue;
            };
            let popped = {
                let Shared {
                    open, space, eps, ..
                } = &mut *sh;
                let space = &*space;
                search::pop_independent(open, space, *eps, |a, b| {
                    self.domain
                        .pairwise_heuristic(space.state(a), space.state(b))
                })
            };
            let entry = match popped {
                Some(entry) => entry,
                None if sh.in_flight == 0 => {
                    // With nothing in flight the OPEN edge of least g always
                    // passes both checks, so this branch is unreachable.
                    debug_assert!(false, "no independent edge and no work in flight");
                    sh.open.pop().expect("OPEN is non-empty")
                }
                None => {
                    sh = self.wait(sh);
                    continue;
                }
            };
            sh.pops += 1;
            let s = entry.edge.state;
            if sh.space.node(s).is_goal && entry.f < sh.f_goal {
                let path = backtrack(&sh.space, sh.start, s)?;
                let cost = path.cost();
                sh.f_goal = cost;
                sh.incumbent = Some(Incumbent {
                    goal: s,
                    path,
                    cost,
                });
            }
            if entry.edge.is_dummy() {
                let iteration = sh.iteration;
                self.expand_dummy(&mut sh, s, iteration);
                continue;
            }
            sh.idle[slot] = false;
            sh.in_flight += 1;
            let iteration = sh.iteration;
            pool.assign(slot, entry, iteration, self, scope);
        };
        while sh.in_flight > 0 {
            sh = self.wait(sh);
        }
        Ok(end)
    }

    /// Dummy branch: `s` enters BE and one real edge per action joins OPEN
    /// at the key of `s`. Runs on the coordinator under the lock.
    fn expand_dummy(&self, sh: &mut Shared<D::State>, s: StateKey, iteration: u32) {
        let actions = self.domain.actions(sh.space.state(s));
        let w = sh.w;
        let node = sh.space.node_mut(s);
        node.n_actions = actions.len() as u32;
        node.n_successors_generated = 0;
        let (g, h) = (node.g, node.h);
        let f = search::priority(g, h, w);
        sh.space.be_insert(s);
        for a in actions {
            sh.open.push_or_update(Edge::new(s, a), f, h);
        }
        if self.tracing {
            sh.log.push(ExpansionEvent {
                t_ns: self.now_ns(),
                iteration,
                worker: COORDINATOR,
                edge: Edge::dummy(s),
                target: None,
                g,
                f,
                kind: EventKind::DummyExpand,
            });
        }
        if sh.space.node(s).n_actions == 0 {
            sh.space.close(s);
        }
    }

    /// Real branch: evaluate outside the lock, then relax the successor.
    /// Runs on a worker thread.
    pub fn expand_edge(&self, task: &worker::Task, log: &mut Option<Vec<ExpansionEvent>>) {
        let edge = task.entry.edge;
        let s = edge.state;
        let event = |ep: &Self, kind, target, g, f| ExpansionEvent {
            t_ns: ep.now_ns(),
            iteration: task.iteration,
            worker: task.slot as u32,
            edge,
            target,
            g,
            f,
            kind,
        };

        debug_assert!(!edge.is_dummy());
        if let Some(log) = log.as_mut() {
            log.push(event(
                self,
                EventKind::EvalStart,
                None,
                f64::NAN,
                task.entry.f,
            ));
        }
        let outcome = self.cache.evaluate(self.domain, &self.registry, edge);
        if let Some(log) = log.as_mut() {
            log.push(event(
                self,
                EventKind::EvalEnd,
                None,
                f64::NAN,
                task.entry.f,
            ));
        }

        let mut guard = self.lock();
        let sh = &mut *guard;
        if let crate::domain::Outcome::Valid { successor, cost } = outcome {
            self.sync_nodes(sh);
            let new_g = sh.space.g(s) + cost;
            let w = sh.w;
            if sh.space.g(successor) > new_g {
                let node = sh.space.node_mut(successor);
                debug_assert!(new_g < node.g, "g must never increase");
                node.g = new_g;
                node.parent = Some(edge);
                node.parent_cost = cost;
                let h = node.h;
                let (blocked, f) = (node.in_closed || node.in_be, search::priority(new_g, h, w));
                if blocked {
                    sh.space.incon_insert(successor);
                } else {
                    sh.open.push_or_update(Edge::dummy(successor), f, h);
                }
                if let Some(log) = log.as_mut() {
                    log.push(event(self, EventKind::Relax, Some(successor), new_g, f));
                }
            }
        }
        let node = sh.space.node_mut(s);
        node.n_successors_generated += 1;
        if node.n_successors_generated == node.n_actions && node.in_be {
            let (g, h) = (node.g, node.h);
            sh.space.close(s);
            if let Some(log) = log.as_mut() {
                log.push(event(
                    self,
                    EventKind::Close,
                    None,
                    g,
                    search::priority(g, h, sh.w),
                ));
            }
        }
        self.finish(guard, task.slot);
    }

    fn finish(&self, mut sh: MutexGuard<'_, Shared<D::State>>, slot: usize) {
        sh.in_flight -= 1;
        sh.idle[slot] = true;
        if cfg!(debug_assertions) {
            for &b in sh.space.be() {
                let n = sh.space.node(b);
                debug_assert!(!n.in_closed && n.n_successors_generated < n.n_actions);
            }
        }
        drop(sh);
        self.changed.notify_all();
    }

    pub fn stop(&self) {
        self.terminate.store(true, Ordering::Release);
    }
}

/// Path from `start` to `s` following stored parent edges.
pub fn backtrack<S: Clone>(
    space: &SearchSpace<S>,
    start: StateKey,
    s: StateKey,
) -> Result<Path<S>, PlanError> {
    let mut steps = Vec::new();
    let mut cur = s;
    while cur != start {
        let node = space.node(cur);
        let parent = node.parent.ok_or(PlanError::BrokenParentChain(s))?;
        steps.push(PathStep {
            action: parent.action,
            state: space.state(cur).clone(),
            cost: node.parent_cost,
        });
        if steps.len() > space.len() {
            return Err(PlanError::BrokenParentChain(s));
        }
        cur = parent.state;
    }
    steps.reverse();
    Ok(Path {
        start: space.state(start).clone(),
        steps,
    })
}
