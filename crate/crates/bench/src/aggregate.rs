//! Table-1 style means, per-run speedups and time-bucketed anytime curves.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::metrics::{RunMetrics, Variant};
use crate::spec::Algorithm;

/// Number of buckets between zero and the widest `t_term`.
pub const CURVE_BUCKETS: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum AggregateError {
    #[error("t_init <= t_opt <= t_term violated: {0}")]
    MetricOrder(String),
}

/// Means over one (variant, cost model) cell. A field is `None` when no run
/// in the cell defines it.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub variant: Variant,
    pub cost_model: String,
    pub runs: usize,
    pub t_init_ms: Option<f64>,
    pub init_ratio: Option<f64>,
    pub t_opt_ms: Option<f64>,
    pub t_term_ms: Option<f64>,
}

/// `baseline / reference` time ratios, computed per matched run then averaged.
#[derive(Clone, Debug, PartialEq)]
pub struct Speedup {
    pub baseline: Variant,
    pub reference: Variant,
    pub cost_model: String,
    pub runs: usize,
    pub s_init: Option<f64>,
    pub s_opt: Option<f64>,
    pub s_term: Option<f64>,
}

/// Mean best-so-far optimality ratio per variant at `k * bucket_ms`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub cost_model: String,
    pub bucket_ms: f64,
    pub times_ms: Vec<f64>,
    pub series: BTreeMap<Variant, Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub cells: Vec<Cell>,
    pub speedups: Vec<Speedup>,
    pub curves: Vec<Curve>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut n, mut s) = (0usize, 0.0);
    for x in xs {
        n += 1;
        s += x;
    }
    (n > 0).then(|| s / n as f64)
}

type Key = (String, usize, usize);

fn run_key(r: &RunMetrics) -> Key {
    (r.map.clone(), r.pair, r.repetition)
}

/// Mean of per-run ratios `baseline / reference` over runs present in both.
pub fn speedup(
    baseline: &[&RunMetrics],
    reference: &[&RunMetrics],
    metric: fn(&RunMetrics) -> Option<f64>,
) -> (usize, Option<f64>) {
    let refs: BTreeMap<Key, &RunMetrics> = reference.iter().map(|r| (run_key(r), *r)).collect();
    let mut matched = 0;
    let ratios: Vec<f64> = baseline
        .iter()
        .filter_map(|b| {
            let r = refs.get(&run_key(b))?;
            matched += 1;
            match (metric(b), metric(r)) {
                (Some(tb), Some(tr)) if tr > 0.0 => Some(tb / tr),
                _ => None,
            }
        })
        .collect();
    (matched, mean(ratios.into_iter()))
}

fn best_so_far(run: &RunMetrics, t: f64) -> f64 {
    run.optimality_ratio_series
        .iter()
        .filter(|p| p.0 <= t)
        .map(|p| p.1)
        .fold(0.0, f64::max)
}

fn curve(cost_model: &str, runs: &[&RunMetrics]) -> Curve {
    let horizon = runs
        .iter()
        .filter_map(|r| r.t_term_ms)
        .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))))
        .unwrap_or_else(|| {
            runs.iter()
                .filter_map(|r| r.optimality_ratio_series.last().map(|p| p.0))
                .fold(0.0, f64::max)
        });
    let bucket_ms = horizon / CURVE_BUCKETS as f64;
    let times_ms: Vec<f64> = if bucket_ms > 0.0 {
        (0..=CURVE_BUCKETS).map(|k| k as f64 * bucket_ms).collect()
    } else {
        vec![0.0]
    };
    let mut by_variant: BTreeMap<Variant, Vec<&RunMetrics>> = BTreeMap::new();
    for r in runs {
        by_variant.entry(r.variant()).or_default().push(r);
    }
    let series = by_variant
        .into_iter()
        .map(|(v, rs)| {
            let values = times_ms
                .iter()
                .map(|&t| mean(rs.iter().map(|r| best_so_far(r, t))).unwrap_or(0.0))
                .collect();
            (v, values)
        })
        .collect();
    Curve {
        cost_model: cost_model.to_string(),
        bucket_ms,
        times_ms,
        series,
    }
}

/// Reduce runs to a [`Summary`]. Speedups compare every other algorithm
/// with `aepase` at the same cost model and delay; parallel baselines must
/// also match the thread count.
pub fn aggregate(runs: &[RunMetrics]) -> Result<Summary, AggregateError> {
    if let Some(v) = runs.iter().find_map(RunMetrics::order_violation) {
        return Err(AggregateError::MetricOrder(v));
    }
    let mut groups: BTreeMap<(String, Variant), Vec<&RunMetrics>> = BTreeMap::new();
    for r in runs {
        groups
            .entry((r.cost_model.clone(), r.variant()))
            .or_default()
            .push(r);
    }

    let cells = groups
        .iter()
        .map(|((cost_model, variant), rs)| Cell {
            variant: *variant,
            cost_model: cost_model.clone(),
            runs: rs.len(),
            t_init_ms: mean(rs.iter().filter_map(|r| r.t_init_ms)),
            init_ratio: mean(
                rs.iter()
                    .filter_map(|r| r.optimality_ratio_series.first().map(|p| p.1)),
            ),
            t_opt_ms: mean(rs.iter().filter_map(|r| r.t_opt_ms)),
            t_term_ms: mean(rs.iter().filter_map(|r| r.t_term_ms)),
        })
        .collect();

    let mut speedups = Vec::new();
    for ((cost_model, reference), refs) in groups
        .iter()
        .filter(|(k, _)| k.1.algorithm == Algorithm::Aepase)
    {
        for ((cm, baseline), base) in &groups {
            let comparable = cm == cost_model
                && baseline.algorithm != Algorithm::Aepase
                && baseline.eval_delay_us == reference.eval_delay_us
                && (baseline.algorithm.is_serial() || baseline.threads == reference.threads);
            if !comparable {
                continue;
            }
            let (n, s_init) = speedup(base, refs, |r| r.t_init_ms);
            let (_, s_opt) = speedup(base, refs, |r| r.t_opt_ms);
            let (_, s_term) = speedup(base, refs, |r| r.t_term_ms);
            speedups.push(Speedup {
                baseline: *baseline,
                reference: *reference,
                cost_model: cost_model.clone(),
                runs: n,
                s_init,
                s_opt,
                s_term,
            });
        }
    }

    let cost_models: BTreeSet<&str> = runs.iter().map(|r| r.cost_model.as_str()).collect();
    let curves = cost_models
        .into_iter()
        .map(|cm| {
            let rs: Vec<&RunMetrics> = runs.iter().filter(|r| r.cost_model == cm).collect();
            curve(cm, &rs)
        })
        .collect();

    Ok(Summary {
        cells,
        speedups,
        curves,
    })
}
