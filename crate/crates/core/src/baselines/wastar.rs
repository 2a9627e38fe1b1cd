use std::time::Duration;

use super::{Clock, Graph, Open};
use crate::anytime::{PlanOutcome, PlanStats, SolutionRecord, Status};
use crate::domain::Domain;
use crate::error::PlanError;

/// Weighted A* without re-expansions, stopping at the first goal expansion.
pub fn weighted_astar<D: Domain>(
    domain: &D,
    start: D::State,
    w: f64,
    time_budget: Duration,
) -> Result<PlanOutcome<D::State>, PlanError> {
    if !(w >= 1.0) {
        return Err(PlanError::InvalidWeight(w));
    }
    let clock = Clock::new(time_budget);
    let mut gr = Graph::new(domain);
    let mut open = Open::new();
    let s0 = gr.intern(&start);
    gr.g[0] = 0.0;
    let f0 = w * gr.h[0];
    open.push(&mut gr, s0, f0);

    let mut records = Vec::new();
    let mut status = Status::Infeasible;
    while let Some(s) = open.pop(&mut gr) {
        if clock.expired() {
            status = Status::Timeout;
            break;
        }
        let i = s as usize;
        if gr.goal[i] {
            records.push(SolutionRecord {
                path: gr.path_to(s),
                cost: gr.g[i],
                w_at_publish: w,
                bound_lambda: w,
                t_since_plan_start: clock.t0.elapsed(),
                iteration_index: 0,
            });
            status = if w == 1.0 {
                Status::ProvedOptimal
            } else {
                Status::Bounded(w)
            };
            break;
        }
        gr.closed[i] = true;
        gr.expansions += 1;
        let g = gr.g[i];
        for (a, t, c) in gr.successors(s) {
            let j = t as usize;
            if !gr.closed[j] && g + c < gr.g[j] {
                gr.g[j] = g + c;
                gr.parent[j] = Some((s, a, c));
                let f = g + c + w * gr.h[j];
                open.push(&mut gr, t, f);
            }
        }
    }
    Ok(PlanOutcome {
        records,
        status,
        stats: PlanStats {
            expansions_per_iteration: vec![gr.expansions],
            evaluations: gr.evaluations,
            states: gr.states.len(),
            elapsed: clock.t0.elapsed(),
            threads_spawned: 0,
            shutdown_latency: Duration::ZERO,
        },
        trace: None,
    })
}
