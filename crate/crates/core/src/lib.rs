//! Parallel anytime edge-based best-first search.
//!
//! The crate is organised bottom-up:
//!
//! * [`domain`]: the planning-domain contract, state registry and edge cache.
//! * [`search`]: OPEN queue of edges, per-state records, independence checks.
//! * [`engine`]: the coordinator/worker edge-expansion engine.
//! * [`anytime`]: the outer weight-decreasing plan loop.
//! * [`baselines`]: serial weighted A*, ARA* and an exhaustive Dijkstra oracle.
//! * [`trace`]: expansion logs and the audits run over them.

// `!(x >= y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anytime;
pub mod baselines;
pub mod domain;
pub mod engine;
pub mod error;
pub mod path;
pub mod search;
pub mod trace;

pub use anytime::{
    plan, plan_fixed_weight, plan_with_sink, weight_schedule, EpsilonPolicy, PlanOutcome,
    PlanStats, PlannerConfig, SolutionRecord, Status, TieBreak,
};
pub use domain::{
    ActionId, Domain, Edge, EdgeCache, Outcome, StateKey, StateRegistry, SuccessorOutcome,
};
pub use error::PlanError;
pub use path::{Path, PathStep};
