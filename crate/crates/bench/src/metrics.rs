//! Per-run metrics: time to first, hindsight-optimal and proved-optimal
//! solution, plus the optimality-ratio series.

use serde::{Deserialize, Serialize};

use aepase_core::Status;

/// Relative tolerance for "equals the oracle cost".
pub const COST_RTOL: f64 = 1e-9;

pub fn cost_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= COST_RTOL * a.abs().max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    ProvedOptimal,
    Bounded,
    Timeout,
    Infeasible,
    Error,
}

impl From<Status> for RunStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::ProvedOptimal => RunStatus::ProvedOptimal,
            Status::Bounded(_) => RunStatus::Bounded,
            Status::Timeout => RunStatus::Timeout,
            Status::Infeasible => RunStatus::Infeasible,
        }
    }
}

/// One planning episode. Times are milliseconds since plan entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub algorithm: crate::spec::Algorithm,
    pub map: String,
    pub cost_model: String,
    pub threads: usize,
    pub eval_delay_us: u64,
    pub pair: usize,
    pub repetition: usize,
    pub start: (i32, i32),
    pub goal: (i32, i32),
    pub optimal_cost: f64,
    pub t_init_ms: Option<f64>,
    pub t_opt_ms: Option<f64>,
    pub t_term_ms: Option<f64>,
    pub cost_init: Option<f64>,
    pub cost_final: Option<f64>,
    /// `(t_ms, optimal / cost)` per published record.
    pub optimality_ratio_series: Vec<(f64, f64)>,
    pub published_costs: Vec<f64>,
    pub expansions_per_iteration: Vec<usize>,
    pub status: RunStatus,
    pub elapsed_ms: f64,
    pub shutdown_latency_ms: f64,
    pub error: Option<String>,
}

/// Timing fields derived from the published `(t_ms, cost)` records.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derived {
    pub t_init_ms: Option<f64>,
    pub t_opt_ms: Option<f64>,
    pub t_term_ms: Option<f64>,
    pub cost_init: Option<f64>,
    pub cost_final: Option<f64>,
    pub ratios: Vec<(f64, f64)>,
}

/// `t_term` is the publication time of the final record of a proved-optimal
/// run, so a single-shot optimal search has `t_init = t_opt = t_term`.
pub fn derive(records: &[(f64, f64)], optimal: f64, proved_optimal: bool) -> Derived {
    let first = records.first();
    Derived {
        t_init_ms: first.map(|r| r.0),
        cost_init: first.map(|r| r.1),
        cost_final: records.last().map(|r| r.1),
        t_opt_ms: records.iter().find(|r| cost_eq(r.1, optimal)).map(|r| r.0),
        t_term_ms: if proved_optimal {
            records.last().map(|r| r.0)
        } else {
            None
        },
        ratios: records.iter().map(|&(t, c)| (t, optimal / c)).collect(),
    }
}

impl RunMetrics {
    /// Violations of `t_init <= t_opt <= t_term` on a proved-optimal run.
    pub fn order_violation(&self) -> Option<String> {
        if self.status != RunStatus::ProvedOptimal {
            return None;
        }
        match (self.t_init_ms, self.t_opt_ms, self.t_term_ms) {
            (Some(a), Some(b), Some(c)) if a <= b && b <= c => None,
            (a, b, c) => Some(format!(
                "{} {} pair {}: t_init {a:?} t_opt {b:?} t_term {c:?}",
                self.algorithm, self.map, self.pair
            )),
        }
    }

    pub fn variant(&self) -> Variant {
        Variant {
            algorithm: self.algorithm,
            threads: self.threads,
            eval_delay_us: self.eval_delay_us,
        }
    }
}

/// An algorithm under one thread count and evaluation delay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variant {
    pub algorithm: crate::spec::Algorithm,
    pub threads: usize,
    pub eval_delay_us: u64,
}

impl Variant {
    pub fn label(&self) -> String {
        format!(
            "{}/t{}/d{}",
            self.algorithm, self.threads, self.eval_delay_us
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_shot_optimal_collapses() {
        let d = derive(&[(11.0, 5.0)], 5.0, true);
        assert_eq!(
            (d.t_init_ms, d.t_opt_ms, d.t_term_ms),
            (Some(11.0), Some(11.0), Some(11.0))
        );
        assert_eq!(d.ratios, vec![(11.0, 1.0)]);
    }

    #[test]
    fn anytime_series() {
        let d = derive(&[(1.0, 8.0), (2.0, 5.0 + 1e-12), (3.0, 5.0)], 5.0, true);
        assert_eq!(d.t_opt_ms, Some(2.0));
        assert_eq!(d.t_term_ms, Some(3.0));
        assert_eq!(d.cost_init, Some(8.0));
        assert_eq!(d.ratios[0].1, 5.0 / 8.0);
        assert_eq!(derive(&[(1.0, 8.0)], 5.0, false).t_term_ms, None);
        assert_eq!(derive(&[], 5.0, false), Derived::default());
    }

    #[test]
    fn tolerance() {
        assert!(cost_eq(100.0, 100.0 + 5e-8));
        assert!(!cost_eq(100.0, 100.0 + 5e-7));
        assert!(cost_eq(0.0, 0.0));
    }
}
