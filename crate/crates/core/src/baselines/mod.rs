//! Serial state-based planners used as references: Dijkstra, weighted A*
//! and ARA*. They share the domain trait with the parallel engine but keep
//! their own interned graph and a lazily cleaned binary heap.

mod arastar;
mod dijkstra;
mod wastar;

pub use arastar::ara_star;
pub use dijkstra::{dijkstra, dijkstra_all, OracleResult};
pub use wastar::weighted_astar;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::domain::{ActionId, Domain, Outcome};
use crate::path::{Path, PathStep};

/// Dense graph of the states a serial search has touched.
struct Graph<'d, D: Domain> {
    domain: &'d D,
    keys: HashMap<D::State, u32>,
    states: Vec<D::State>,
    g: Vec<f64>,
    h: Vec<f64>,
    /// Current OPEN key; a heap entry with a different key is stale.
    key: Vec<f64>,
    parent: Vec<Option<(u32, ActionId, f64)>>,
    goal: Vec<bool>,
    open: Vec<bool>,
    closed: Vec<bool>,
    evaluations: usize,
    expansions: usize,
}

impl<'d, D: Domain> Graph<'d, D> {
    fn new(domain: &'d D) -> Self {
        Graph {
            domain,
            keys: HashMap::new(),
            states: Vec::new(),
            g: Vec::new(),
            h: Vec::new(),
            key: Vec::new(),
            parent: Vec::new(),
            goal: Vec::new(),
            open: Vec::new(),
            closed: Vec::new(),
            evaluations: 0,
            expansions: 0,
        }
    }

    fn intern(&mut self, s: &D::State) -> u32 {
        if let Some(&k) = self.keys.get(s) {
            return k;
        }
        let k = self.states.len() as u32;
        self.keys.insert(s.clone(), k);
        self.states.push(s.clone());
        self.g.push(f64::INFINITY);
        self.h.push(self.domain.heuristic(s));
        self.key.push(f64::INFINITY);
        self.parent.push(None);
        self.goal.push(self.domain.is_goal(s));
        self.open.push(false);
        self.closed.push(false);
        k
    }

    /// Evaluate every action of `s`, interning the successors.
    fn successors(&mut self, s: u32) -> Vec<(ActionId, u32, f64)> {
        let state = self.states[s as usize].clone();
        let mut out = Vec::new();
        for a in self.domain.actions(&state) {
            self.evaluations += 1;
            if let Outcome::Valid { successor, cost } = self.domain.evaluate(&state, a) {
                let k = self.intern(&successor);
                out.push((a, k, cost));
            }
        }
        out
    }

    fn path_to(&self, s: u32) -> Path<D::State> {
        let mut steps = Vec::new();
        let mut cur = s;
        while let Some((p, a, c)) = self.parent[cur as usize] {
            steps.push(PathStep {
                action: a,
                state: self.states[cur as usize].clone(),
                cost: c,
            });
            cur = p;
        }
        steps.reverse();
        Path {
            start: self.states[cur as usize].clone(),
            steps,
        }
    }
}

/// Min-heap entry ordered by key, then h, then discovery order.
#[derive(Clone, Copy, Debug)]
struct HeapItem {
    f: f64,
    h: f64,
    k: u32,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so that `BinaryHeap` pops the smallest.
        other
            .f
            .total_cmp(&self.f)
            .then(other.h.total_cmp(&self.h))
            .then(other.k.cmp(&self.k))
    }
}

/// OPEN over a [`Graph`]: a binary heap with lazy deletion.
struct Open {
    heap: std::collections::BinaryHeap<HeapItem>,
}

impl Open {
    fn new() -> Self {
        Open {
            heap: std::collections::BinaryHeap::new(),
        }
    }

    fn push<D: Domain>(&mut self, gr: &mut Graph<'_, D>, k: u32, f: f64) {
        let i = k as usize;
        gr.key[i] = f;
        gr.open[i] = true;
        self.heap.push(HeapItem { f, h: gr.h[i], k });
    }

    fn discard_stale<D: Domain>(&mut self, gr: &Graph<'_, D>) {
        while let Some(top) = self.heap.peek() {
            let i = top.k as usize;
            if gr.open[i] && gr.key[i] == top.f {
                break;
            }
            self.heap.pop();
        }
    }

    fn min_f<D: Domain>(&mut self, gr: &Graph<'_, D>) -> f64 {
        self.discard_stale(gr);
        self.heap.peek().map_or(f64::INFINITY, |e| e.f)
    }

    fn pop<D: Domain>(&mut self, gr: &mut Graph<'_, D>) -> Option<u32> {
        self.discard_stale(gr);
        let top = self.heap.pop()?;
        gr.open[top.k as usize] = false;
        Some(top.k)
    }

    /// Rebuild with keys `g + w·h` for every open state.
    fn rekey<D: Domain>(&mut self, gr: &mut Graph<'_, D>, w: f64) {
        self.heap.clear();
        for i in 0..gr.states.len() {
            if gr.open[i] {
                let f = gr.g[i] + w * gr.h[i];
                gr.key[i] = f;
                self.heap.push(HeapItem {
                    f,
                    h: gr.h[i],
                    k: i as u32,
                });
            }
        }
    }
}

struct Clock {
    t0: Instant,
    deadline: Option<Instant>,
}

impl Clock {
    fn new(budget: Duration) -> Self {
        let t0 = Instant::now();
        Clock {
            t0,
            deadline: t0.checked_add(budget),
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}
