use std::time::Duration;

use super::{Clock, Graph, Open};
use crate::anytime::{
    weight_schedule, PlanOutcome, PlanStats, PlannerConfig, SolutionRecord, Status,
};
use crate::domain::Domain;
use crate::error::PlanError;

/// Serial ARA* over the weight schedule of `config`. Only `w0`, `delta_w`
/// and `time_budget` are read.
pub fn ara_star<D: Domain>(
    config: &PlannerConfig,
    domain: &D,
    start: D::State,
) -> Result<PlanOutcome<D::State>, PlanError> {
    let weights = weight_schedule(config.w0, config.delta_w)?;
    let clock = Clock::new(config.time_budget);
    let mut gr = Graph::new(domain);
    let mut open = Open::new();
    let s0 = gr.intern(&start);
    gr.g[0] = 0.0;
    let f0 = weights[0] * gr.h[0];
    open.push(&mut gr, s0, f0);

    let mut incons: Vec<u32> = Vec::new();
    let mut in_incons: Vec<bool> = Vec::new();
    // Best goal reached so far.
    let mut goal: Option<u32> = if gr.goal[0] { Some(0) } else { None };
    let mut records = Vec::new();
    let mut expansions_per_iteration = Vec::new();
    let mut status = Status::Timeout;

    'outer: for (it, &w) in weights.iter().enumerate() {
        if it > 0 {
            for k in incons.drain(..) {
                in_incons[k as usize] = false;
                gr.open[k as usize] = true;
            }
            open.rekey(&mut gr, w);
            gr.closed.iter_mut().for_each(|c| *c = false);
        }
        let before = gr.expansions;
        loop {
            let g_goal = goal.map_or(f64::INFINITY, |k| gr.g[k as usize]);
            if !(g_goal > open.min_f(&gr)) {
                break;
            }
            if clock.expired() {
                expansions_per_iteration.push(gr.expansions - before);
                status = Status::Timeout;
                break 'outer;
            }
            let Some(s) = open.pop(&mut gr) else { break };
            let i = s as usize;
            gr.closed[i] = true;
            gr.expansions += 1;
            let g = gr.g[i];
            for (a, t, c) in gr.successors(s) {
                let j = t as usize;
                if g + c < gr.g[j] {
                    gr.g[j] = g + c;
                    gr.parent[j] = Some((s, a, c));
                    if gr.goal[j] && goal.is_none_or(|k| gr.g[j] < gr.g[k as usize]) {
                        goal = Some(t);
                    }
                    if gr.closed[j] {
                        if in_incons.len() <= j {
                            in_incons.resize(j + 1, false);
                        }
                        if !in_incons[j] {
                            in_incons[j] = true;
                            incons.push(t);
                        }
                    } else {
                        let f = g + c + w * gr.h[j];
                        open.push(&mut gr, t, f);
                    }
                }
            }
        }
        expansions_per_iteration.push(gr.expansions - before);
        let Some(k) = goal else {
            status = Status::Infeasible;
            break;
        };
        records.push(SolutionRecord {
            path: gr.path_to(k),
            cost: gr.g[k as usize],
            w_at_publish: w,
            bound_lambda: w,
            t_since_plan_start: clock.t0.elapsed(),
            iteration_index: it as u32,
        });
        status = if w == 1.0 {
            Status::ProvedOptimal
        } else {
            Status::Bounded(w)
        };
    }
    Ok(PlanOutcome {
        records,
        status,
        stats: PlanStats {
            expansions_per_iteration,
            evaluations: gr.evaluations,
            states: gr.states.len(),
            elapsed: clock.t0.elapsed(),
            threads_spawned: 0,
            shutdown_latency: Duration::ZERO,
        },
        trace: None,
    })
}
