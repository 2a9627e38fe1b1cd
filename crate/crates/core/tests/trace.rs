mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::Duration;

use aepase_core::trace::{peak_concurrent_evaluations, EventKind};
use aepase_core::{
    plan, plan_fixed_weight, plan_with_sink, weight_schedule, Domain, EpsilonPolicy, Outcome,
    PlannerConfig, Status,
};
use common::TestGrid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Cell = (i32, i32);
type Key = (u64, u64, u32, u32);

const DUMMY: u32 = u32::MAX;

/// Monotone bit pattern for non-negative floats, usable as an ordered key.
fn ord(x: f64) -> u64 {
    assert!(x >= 0.0);
    x.to_bits()
}

/// A plain serial edge-based anytime search written independently of the
/// engine: OPEN is a `BTreeSet` ordered by (f, h, state, action).
struct Serial<'a> {
    grid: &'a TestGrid,
    keys: HashMap<Cell, u32>,
    states: Vec<Cell>,
    g: Vec<f64>,
    h: Vec<f64>,
    parent: Vec<Option<(u32, f64)>>,
    be: BTreeSet<u32>,
    closed: Vec<bool>,
    incon: BTreeSet<u32>,
    generated: Vec<u32>,
    open: BTreeSet<Key>,
    key_of: HashMap<(u32, u32), Key>,
    events: Vec<(u32, EventKind, u32, u32, Option<u32>)>,
    f_goal: f64,
    evaluated: HashMap<(u32, u32), Outcome<u32>>,
}

impl<'a> Serial<'a> {
    fn new(grid: &'a TestGrid, start: Cell) -> Self {
        let mut s = Serial {
            grid,
            keys: HashMap::new(),
            states: Vec::new(),
            g: Vec::new(),
            h: Vec::new(),
            parent: Vec::new(),
            be: BTreeSet::new(),
            closed: Vec::new(),
            incon: BTreeSet::new(),
            generated: Vec::new(),
            open: BTreeSet::new(),
            key_of: HashMap::new(),
            events: Vec::new(),
            f_goal: f64::INFINITY,
            evaluated: HashMap::new(),
        };
        s.intern(start);
        s.g[0] = 0.0;
        s
    }

    fn intern(&mut self, c: Cell) -> u32 {
        if let Some(&k) = self.keys.get(&c) {
            return k;
        }
        let k = self.states.len() as u32;
        self.keys.insert(c, k);
        self.states.push(c);
        self.g.push(f64::INFINITY);
        self.h.push(self.grid.heuristic(&c));
        self.parent.push(None);
        self.closed.push(false);
        self.generated.push(0);
        k
    }

    fn put(&mut self, s: u32, a: u32, w: f64) {
        let i = s as usize;
        let key = (ord(self.g[i] + w * self.h[i]), ord(self.h[i]), s, a);
        if let Some(old) = self.key_of.insert((s, a), key) {
            self.open.remove(&old);
        }
        self.open.insert(key);
    }

    fn remove(&mut self, s: u32, a: u32) {
        if let Some(old) = self.key_of.remove(&(s, a)) {
            self.open.remove(&old);
        }
    }

    fn rekey(&mut self, w: f64) {
        let entries: Vec<(u32, u32)> = self.key_of.keys().copied().collect();
        for (s, a) in entries {
            self.put(s, a, w);
        }
    }

    fn merge(&mut self, w: f64) {
        for s in std::mem::take(&mut self.incon) {
            self.put(s, DUMMY, w);
        }
        self.rekey(w);
    }

    fn path_cost(&self, mut s: u32) -> f64 {
        let mut costs = Vec::new();
        while let Some((p, c)) = self.parent[s as usize] {
            costs.push(c);
            s = p;
        }
        costs.iter().rev().sum()
    }

    fn begin(&mut self, w: f64) {
        self.closed.iter_mut().for_each(|c| *c = false);
        for s in std::mem::take(&mut self.be) {
            for a in 0..8 {
                self.remove(s, a);
            }
            self.put(s, DUMMY, w);
        }
        self.merge(w);
    }

    fn improve(&mut self, it: u32, w: f64) {
        while let Some(&top) = self.open.iter().next() {
            let f = f64::from_bits(top.0);
            if self.f_goal <= f {
                break;
            }
            self.open.remove(&top);
            let (s, a) = (top.2, top.3);
            self.key_of.remove(&(s, a));
            let i = s as usize;
            if self.grid.is_goal(&self.states[i]) && f < self.f_goal {
                self.f_goal = self.path_cost(s);
            }
            if a == DUMMY {
                self.events.push((it, EventKind::DummyExpand, s, a, None));
                self.be.insert(s);
                self.generated[i] = 0;
                for b in 0..8 {
                    self.put(s, b, w);
                }
                continue;
            }
            self.events.push((it, EventKind::EvalStart, s, a, None));
            self.events.push((it, EventKind::EvalEnd, s, a, None));
            let out = match self.evaluated.get(&(s, a)) {
                Some(o) => *o,
                None => {
                    let o = self
                        .grid
                        .evaluate(&self.states[i], aepase_core::ActionId(a));
                    let o = o.map(|c| self.intern(c));
                    self.evaluated.insert((s, a), o);
                    o
                }
            };
            if let Outcome::Valid { successor: t, cost } = out {
                let j = t as usize;
                let ng = self.g[i] + cost;
                if self.g[j] > ng {
                    self.g[j] = ng;
                    self.parent[j] = Some((s, cost));
                    if self.closed[j] || self.be.contains(&t) {
                        self.incon.insert(t);
                    } else {
                        self.put(t, DUMMY, w);
                    }
                    self.events.push((it, EventKind::Relax, s, a, Some(t)));
                }
            }
            self.generated[i] += 1;
            if self.generated[i] == 8 {
                self.be.remove(&s);
                self.closed[i] = true;
                self.events.push((it, EventKind::Close, s, a, None));
            }
        }
    }

    /// Published costs over the schedule.
    fn run(&mut self, weights: &[f64]) -> Vec<f64> {
        self.put(0, DUMMY, weights[0]);
        let mut costs = Vec::new();
        for (it, &w) in weights.iter().enumerate() {
            self.begin(w);
            self.improve(it as u32, w);
            if self.f_goal.is_infinite() {
                return Vec::new();
            }
            costs.push(self.f_goal);
            if let Some(&next) = weights.get(it + 1) {
                self.merge(next);
            }
        }
        costs
    }
}

fn grids(n: usize, size: i32, seed: u64) -> Vec<(TestGrid, Cell)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let mut g = TestGrid::random(size, size, 0.25, seed * 977 + i as u64);
            g.goal = g.random_free(&mut rng);
            let start = g.random_free(&mut rng);
            (g, start)
        })
        .collect()
}

fn serial_config(w0: f64) -> PlannerConfig {
    PlannerConfig {
        w0,
        delta_w: 0.5,
        epsilon: EpsilonPolicy::Fixed(f64::INFINITY),
        n_threads: 1,
        record_trace: true,
        ..PlannerConfig::default()
    }
}

#[test]
fn single_thread_trace_equals_serial_reference() {
    for (grid, start) in grids(10, 16, 11) {
        for w0 in [1.0, 3.0, 20.0] {
            let out = plan(&serial_config(w0), &grid, start).unwrap();
            let trace = out.trace.unwrap();
            let got: Vec<_> = trace
                .events
                .iter()
                .map(|e| {
                    (
                        e.iteration,
                        e.kind,
                        e.edge.state.0,
                        e.edge.action.0,
                        e.target.map(|t| t.0),
                    )
                })
                .collect();
            let mut reference = Serial::new(&grid, start);
            let costs = reference.run(&weight_schedule(w0, 0.5).unwrap());
            if let Some(i) =
                (0..got.len().min(reference.events.len())).find(|&i| got[i] != reference.events[i])
            {
                panic!(
                    "w0={w0} at {i}: {:?} vs {:?}",
                    &got[i.saturating_sub(3)..i + 3],
                    &reference.events[i.saturating_sub(3)..i + 3]
                );
            }
            assert_eq!(got, reference.events, "w0={w0}");
            assert_eq!(
                out.records.iter().map(|r| r.cost).collect::<Vec<_>>(),
                costs
            );
        }
    }
}

#[test]
fn single_shot_trace_equals_serial_reference() {
    for (grid, start) in grids(10, 16, 12) {
        let out = plan_fixed_weight(&serial_config(1.0), &grid, start, 2.5).unwrap();
        let trace = out.trace.unwrap();
        let got: Vec<_> = trace
            .events
            .iter()
            .map(|e| {
                (
                    e.iteration,
                    e.kind,
                    e.edge.state.0,
                    e.edge.action.0,
                    e.target.map(|t| t.0),
                )
            })
            .collect();
        let mut reference = Serial::new(&grid, start);
        reference.run(&[2.5]);
        assert_eq!(got, reference.events);
    }
}

#[test]
fn audits_are_clean_across_thread_counts() {
    for (grid, start) in grids(12, 20, 13) {
        for threads in [1, 3, 8] {
            let cfg = PlannerConfig {
                w0: 6.0,
                delta_w: 0.5,
                n_threads: threads,
                record_trace: true,
                ..PlannerConfig::default()
            };
            let out = plan(&cfg, &grid, start).unwrap();
            let trace = out.trace.as_ref().unwrap();
            let report = trace.audit();
            assert!(report.is_clean(), "N_t={threads}: {report:?}");
            assert_eq!(
                trace.iterations.len(),
                out.stats.expansions_per_iteration.len()
            );
        }
    }
}

#[test]
fn later_iterations_expand_only_repaired_states() {
    // Iterations whose OPEN start set is empty pop nothing.
    for (grid, start) in grids(6, 20, 14) {
        let mut cfg = serial_config(10.0);
        cfg.epsilon = EpsilonPolicy::EqualToW;
        let out = plan(&cfg, &grid, start).unwrap();
        let trace = out.trace.unwrap();
        for it in &trace.iterations {
            if it.inconsistent_at_start.is_empty() {
                assert_eq!(it.pops, 0, "iteration {}", it.index);
            }
        }
    }
}

#[test]
fn eight_workers_evaluate_concurrently() {
    let mut grid = TestGrid::open(12, 12);
    grid.delay = Duration::from_millis(2);
    let cfg = PlannerConfig {
        w0: 1.0,
        n_threads: 8,
        record_trace: true,
        ..PlannerConfig::default()
    };
    let out = plan(&cfg, &grid, (0, 0)).unwrap();
    assert_eq!(out.status, Status::ProvedOptimal);
    let trace = out.trace.unwrap();
    let peak = peak_concurrent_evaluations(&trace.events);
    assert!(peak >= 6, "peak concurrency {peak}");
    assert_eq!(out.stats.threads_spawned, 8);
}

#[test]
fn records_arrive_before_the_next_iteration_starts() {
    let (grid, start) = grids(1, 20, 15).pop().unwrap();
    let cfg = PlannerConfig {
        w0: 4.0,
        delta_w: 0.5,
        n_threads: 4,
        record_trace: true,
        ..PlannerConfig::default()
    };
    let mut arrivals = Vec::new();
    let t0 = std::time::Instant::now();
    let out = plan_with_sink(&cfg, &grid, start, &mut |r| {
        arrivals.push((r.iteration_index, r.t_since_plan_start, t0.elapsed()));
    })
    .unwrap();
    assert_eq!(arrivals.len(), out.records.len());
    assert!(arrivals.windows(2).all(|p| p[0].0 < p[1].0));
    let trace = out.trace.unwrap();
    for &(it, published, _) in &arrivals {
        let published = published.as_nanos() as u64;
        if let Some(first) = trace.events.iter().find(|e| e.iteration == it + 1) {
            assert!(published <= first.t_ns);
        }
        assert!(trace
            .events
            .iter()
            .filter(|e| e.iteration == it)
            .all(|e| e.t_ns <= published));
    }
}

#[test]
fn workers_join_promptly() {
    for (grid, start) in grids(5, 20, 16) {
        let cfg = PlannerConfig {
            n_threads: 8,
            ..PlannerConfig::default()
        };
        let out = plan(&cfg, &grid, start).unwrap();
        assert!(out.stats.shutdown_latency < Duration::from_millis(50));
    }
}

#[test]
fn ndjson_has_one_line_per_event() {
    let (grid, start) = grids(1, 10, 17).pop().unwrap();
    let out = plan(&serial_config(2.0), &grid, start).unwrap();
    let trace = out.trace.unwrap();
    let text = trace.to_ndjson();
    assert_eq!(text.lines().count(), trace.events.len());
    assert!(text
        .lines()
        .all(|l| l.starts_with("{\"t_ns\":") && l.ends_with('}')));
    assert!(text.contains("\"worker\":\"coordinator\""));
}

#[test]
fn closed_states_lowered_late_are_repaired_next_iteration() {
    let mut repaired = 0;
    for (grid, start) in grids(10, 20, 18) {
        let out = plan(&serial_config(50.0), &grid, start).unwrap();
        let trace = out.trace.unwrap();
        for it in trace.iterations.iter().skip(1) {
            for s in &it.inconsistent_at_start {
                let lowered_before = trace.events.iter().any(|e| {
                    e.kind == EventKind::Relax && e.target == Some(*s) && e.iteration < it.index
                });
                // Or left partially expanded by an earlier call.
                let mine = |kind| {
                    trace.events.iter().rposition(|e| {
                        e.kind == kind && e.edge.state == *s && e.iteration < it.index
                    })
                };
                let opened = mine(EventKind::DummyExpand);
                let closed = mine(EventKind::Close);
                let partial = opened.is_some() && closed < opened;
                assert!(
                    lowered_before || partial,
                    "s{} in iteration {}",
                    s.0,
                    it.index
                );
                repaired += 1;
            }
        }
    }
    assert!(repaired > 0);
}
