//! Expansion logs and the audits evaluated over them.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::domain::{Edge, StateKey, SuccessorOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    DummyExpand,
    EvalStart,
    EvalEnd,
    Relax,
    Close,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::DummyExpand => "dummy_expand",
            EventKind::EvalStart => "eval_start",
            EventKind::EvalEnd => "eval_end",
            EventKind::Relax => "relax",
            EventKind::Close => "close",
        }
    }
}

/// `worker` value of events logged by the coordinator thread.
pub const COORDINATOR: u32 = u32::MAX;

/// One logged event. For `Relax`, `target` is the state whose g was lowered
/// and `g`/`f` are its new values; otherwise they describe `edge.state`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionEvent {
    pub t_ns: u64,
    pub iteration: u32,
    pub worker: u32,
    pub edge: Edge,
    pub target: Option<StateKey>,
    pub g: f64,
    pub f: f64,
    pub kind: EventKind,
}

impl ExpansionEvent {
    /// One NDJSON record.
    pub fn to_json(&self) -> String {
        let mut s = String::with_capacity(160);
        let _ = write!(
            s,
            "{{\"t_ns\":{},\"iteration\":{},\"worker\":{},\"state\":{},\"action\":{},",
            self.t_ns,
            self.iteration,
            if self.worker == COORDINATOR {
                "\"coordinator\"".to_string()
            } else {
                self.worker.to_string()
            },
            self.edge.state.0,
            if self.edge.is_dummy() {
                "\"dummy\"".to_string()
            } else {
                self.edge.action.0.to_string()
            }
        );
        if let Some(t) = self.target {
            let _ = write!(s, "\"target\":{},", t.0);
        }
        let _ = write!(
            s,
            "\"g\":{},\"f\":{},\"kind\":\"{}\"}}",
            json_num(self.g),
            json_num(self.f),
            self.kind.as_str()
        );
        s
    }
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "null".into()
    }
}

/// Per-iteration snapshot taken when an improve-path call begins.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub index: u32,
    pub w: f64,
    pub eps: f64,
    /// States whose dummy edge sat in OPEN when the iteration started: the
    /// states that were locally inconsistent before the call.
    pub inconsistent_at_start: Vec<StateKey>,
    pub pops: usize,
}

/// Everything recorded during one traced episode.
#[derive(Clone, Debug)]
pub struct Trace<S> {
    /// Events sorted by timestamp.
    pub events: Vec<ExpansionEvent>,
    pub iterations: Vec<IterationRecord>,
    /// Registry contents: `states[k]` is the state with key `k`.
    pub states: Vec<S>,
    /// Every edge the cache evaluated.
    pub edges: Vec<(Edge, SuccessorOutcome)>,
}

impl<S> Trace<S> {
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_json());
            out.push('\n');
        }
        out
    }

    pub fn audit(&self) -> AuditReport {
        audit_events(&self.events, &self.iterations)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    /// Dummy edges expanded more than once inside one iteration.
    pub duplicate_dummy: Vec<(u32, StateKey)>,
    /// Real edges evaluated more than once inside one iteration.
    pub duplicate_real: Vec<(u32, Edge)>,
    /// States expanded although neither inconsistent at iteration start nor
    /// lowered earlier in the same iteration.
    pub efficiency_violations: Vec<(u32, StateKey)>,
    pub dummy_expansions: usize,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.duplicate_dummy.is_empty()
            && self.duplicate_real.is_empty()
            && self.efficiency_violations.is_empty()
    }
}

/// At-most-once expansion per iteration and the anytime-efficiency condition.
pub fn audit_events(events: &[ExpansionEvent], iterations: &[IterationRecord]) -> AuditReport {
    let mut report = AuditReport::default();
    let start_sets: HashMap<u32, HashSet<StateKey>> = iterations
        .iter()
        .map(|it| (it.index, it.inconsistent_at_start.iter().copied().collect()))
        .collect();
    let mut lowered: HashMap<u32, HashSet<StateKey>> = HashMap::new();
    let mut dummies: HashSet<(u32, StateKey)> = HashSet::new();
    let mut reals: HashSet<(u32, Edge)> = HashSet::new();

    let mut ordered: Vec<&ExpansionEvent> = events.iter().collect();
    ordered.sort_by_key(|e| e.t_ns);
    for ev in ordered {
        match ev.kind {
            EventKind::Relax => {
                if let Some(t) = ev.target {
                    lowered.entry(ev.iteration).or_default().insert(t);
                }
            }
            EventKind::DummyExpand => {
                report.dummy_expansions += 1;
                let s = ev.edge.state;
                if !dummies.insert((ev.iteration, s)) {
                    report.duplicate_dummy.push((ev.iteration, s));
                }
                let was_inconsistent = start_sets
                    .get(&ev.iteration)
                    .is_some_and(|set| set.contains(&s));
                let was_lowered = lowered
                    .get(&ev.iteration)
                    .is_some_and(|set| set.contains(&s));
                if !was_inconsistent && !was_lowered {
                    report.efficiency_violations.push((ev.iteration, s));
                }
            }
            EventKind::EvalStart => {
                if !reals.insert((ev.iteration, ev.edge)) {
                    report.duplicate_real.push((ev.iteration, ev.edge));
                }
            }
            EventKind::EvalEnd | EventKind::Close => {}
        }
    }
    report
}

/// Count of evaluations whose [start, end] intervals overlap some other
/// evaluation on a different worker.
pub fn overlapping_evaluations(events: &[ExpansionEvent]) -> usize {
    let mut open: HashMap<(u32, Edge), u64> = HashMap::new();
    let mut spans: Vec<(u64, u64, u32)> = Vec::new();
    for ev in events {
        match ev.kind {
            EventKind::EvalStart => {
                open.insert((ev.worker, ev.edge), ev.t_ns);
            }
            EventKind::EvalEnd => {
                if let Some(t0) = open.remove(&(ev.worker, ev.edge)) {
                    spans.push((t0, ev.t_ns, ev.worker));
                }
            }
            _ => {}
        }
    }
    spans
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            spans
                .iter()
                .enumerate()
                .any(|(j, b)| *i != j && a.2 != b.2 && a.0 < b.1 && b.0 < a.1)
        })
        .count()
}

/// Largest number of evaluations in progress at one instant.
pub fn peak_concurrent_evaluations(events: &[ExpansionEvent]) -> usize {
    let mut marks: Vec<(u64, i32)> = events
        .iter()
        .filter_map(|ev| match ev.kind {
            EventKind::EvalStart => Some((ev.t_ns, 1)),
            EventKind::EvalEnd => Some((ev.t_ns, -1)),
            _ => None,
        })
        .collect();
    // Ends sort before starts at equal timestamps.
    marks.sort();
    let (mut cur, mut peak) = (0i32, 0i32);
    for (_, d) in marks {
        cur += d;
        peak = peak.max(cur);
    }
    peak as usize
}
