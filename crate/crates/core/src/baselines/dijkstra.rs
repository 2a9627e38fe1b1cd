use std::collections::HashMap;

use super::{Graph, Open};
use crate::domain::Domain;
use crate::path::Path;

/// Exact shortest-path result.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult<S> {
    /// `+inf` exactly when `path` is `None`.
    pub cost: f64,
    pub path: Option<Path<S>>,
    pub expansions: usize,
    pub evaluations: usize,
}

/// Uniform-cost search to the nearest goal. Ignores the heuristic.
pub fn dijkstra<D: Domain>(domain: &D, start: D::State) -> OracleResult<D::State> {
    let mut gr = Graph::new(domain);
    let mut open = Open::new();
    let s0 = gr.intern(&start);
    gr.g[0] = 0.0;
    open.push(&mut gr, s0, 0.0);
    while let Some(s) = open.pop(&mut gr) {
        let i = s as usize;
        if gr.goal[i] {
            return OracleResult {
                cost: gr.g[i],
                path: Some(gr.path_to(s)),
                expansions: gr.expansions,
                evaluations: gr.evaluations,
            };
        }
        gr.closed[i] = true;
        gr.expansions += 1;
        relax_all(&mut gr, &mut open, s);
    }
    OracleResult {
        cost: f64::INFINITY,
        path: None,
        expansions: gr.expansions,
        evaluations: gr.evaluations,
    }
}

/// Shortest-path cost from `start` to every reachable state.
pub fn dijkstra_all<D: Domain>(domain: &D, start: D::State) -> HashMap<D::State, f64> {
    let mut gr = Graph::new(domain);
    let mut open = Open::new();
    let s0 = gr.intern(&start);
    gr.g[0] = 0.0;
    open.push(&mut gr, s0, 0.0);
    while let Some(s) = open.pop(&mut gr) {
        gr.closed[s as usize] = true;
        relax_all(&mut gr, &mut open, s);
    }
    gr.states
        .into_iter()
        .zip(gr.g)
        .filter(|(_, g)| g.is_finite())
        .collect()
}

fn relax_all<D: Domain>(gr: &mut Graph<'_, D>, open: &mut Open, s: u32) {
    let g = gr.g[s as usize];
    for (a, t, c) in gr.successors(s) {
        let j = t as usize;
        if !gr.closed[j] && g + c < gr.g[j] {
            gr.g[j] = g + c;
            gr.parent[j] = Some((s, a, c));
            open.push(gr, t, g + c);
        }
    }
}
