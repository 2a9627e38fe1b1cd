//! Shared mutable search state: the OPEN queue of edges, the per-state
//! records with BE/CLOSED/INCON membership, and the independence-filtered pop.
//!
//! Nothing here is thread-safe by itself; the engine mutates it only inside
//! its single critical section.

mod queue;
mod space;

pub use queue::{OpenQueue, QueueEntry};
pub use space::{SearchNode, SearchSpace};

use crate::domain::{Edge, StateKey};
use crate::error::PlanError;

/// `g + w·h`, rejecting weights below one.
pub fn edge_priority(g: f64, h: f64, w: f64) -> Result<f64, PlanError> {
    if !(w >= 1.0) {
        return Err(PlanError::InvalidWeight(w));
    }
    Ok(priority(g, h, w))
}

#[inline]
pub(crate) fn priority(g: f64, h: f64, w: f64) -> f64 {
    g + w * h
}

/// `g_e - g_other <= eps * h_pair`, with an infinite `eps` disabling the test.
#[inline]
fn cannot_reduce(g_e: f64, g_other: f64, eps: f64, h_pair: f64) -> bool {
    eps == f64::INFINITY || g_e - g_other <= eps * h_pair
}

/// Whether an edge sourced at `state` with key `f` is independent of every
/// OPEN edge with a strictly smaller key and of every state in BE.
///
/// `pairwise(a, b)` is the pairwise heuristic from `a` to `b`.
pub fn is_independent<S>(
    state: StateKey,
    f: f64,
    open: &OpenQueue,
    space: &SearchSpace<S>,
    eps: f64,
    pairwise: impl Fn(StateKey, StateKey) -> f64,
) -> bool {
    let g = space.g(state);
    open.iter().filter(|other| other.f < f).all(|other| {
        cannot_reduce(
            g,
            space.g(other.edge.state),
            eps,
            pairwise(other.edge.state, state),
        )
    }) && space
        .be()
        .iter()
        .all(|&b| cannot_reduce(g, space.g(b), eps, pairwise(b, state)))
}

/// Remove and return the lowest-priority edge that passes both independence
/// checks, or `None` if no contained edge qualifies (OPEN is left intact).
///
/// Candidates are visited in priority order; the OPEN-side check of each
/// candidate runs against the lower-key candidates skipped before it.
pub fn pop_independent<S>(
    open: &mut OpenQueue,
    space: &SearchSpace<S>,
    eps: f64,
    pairwise: impl Fn(StateKey, StateKey) -> f64,
) -> Option<QueueEntry> {
    if eps == f64::INFINITY {
        return open.pop();
    }
    let mut skipped: Vec<QueueEntry> = Vec::new();
    let mut found = None;
    while let Some(cand) = open.pop() {
        let g = space.g(cand.edge.state);
        let ok = skipped.iter().filter(|e| e.f < cand.f).all(|e| {
            e.edge.state == cand.edge.state
                || cannot_reduce(
                    g,
                    space.g(e.edge.state),
                    eps,
                    pairwise(e.edge.state, cand.edge.state),
                )
        }) && space.be().iter().all(|&b| {
            b == cand.edge.state || cannot_reduce(g, space.g(b), eps, pairwise(b, cand.edge.state))
        });
        if ok {
            found = Some(cand);
            break;
        }
        skipped.push(cand);
    }
    for e in skipped {
        open.push_or_update(e.edge, e.f, e.h);
    }
    found
}

/// Recompute every OPEN key as `g(state) + w·h(state)`.
pub fn rebalance<S>(open: &mut OpenQueue, w: f64, space: &SearchSpace<S>) {
    open.rekey(|e| priority(space.g(e.edge.state), e.h, w));
}

/// Move every INCON state's dummy edge into OPEN keyed at `g + w·h` and
/// empty INCON. A state already present in OPEN keeps a single entry.
pub fn merge_incons<S>(open: &mut OpenQueue, space: &mut SearchSpace<S>, w: f64) {
    for s in space.take_incon() {
        let n = space.node(s);
        open.push_or_update(Edge::dummy(s), priority(n.g, n.h, w), n.h);
    }
}
