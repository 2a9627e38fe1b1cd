//! CSV and NDJSON serialization of a [`Summary`] and its runs.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use aepase_grid::CostKind;

use crate::aggregate::Summary;
use crate::metrics::RunMetrics;

pub const TABLE1_HEADER: &str =
    "algorithm,threads,eval_delay_us,cost_model,runs,t_init_ms,init_ratio,t_opt_ms,t_term_ms";
pub const SPEEDUP_HEADER: &str =
    "baseline,baseline_threads,reference_threads,eval_delay_us,cost_model,runs,s_init,s_opt,s_term";

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

pub fn table1_csv(s: &Summary) -> String {
    let mut out = format!("{TABLE1_HEADER}\n");
    for c in &s.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.variant.algorithm,
            c.variant.threads,
            c.variant.eval_delay_us,
            c.cost_model,
            c.runs,
            num(c.t_init_ms),
            num(c.init_ratio),
            num(c.t_opt_ms),
            num(c.t_term_ms)
        );
    }
    out
}

pub fn speedup_csv(s: &Summary) -> String {
    let mut out = format!("{SPEEDUP_HEADER}\n");
    for r in &s.speedups {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.baseline.algorithm,
            r.baseline.threads,
            r.reference.threads,
            r.baseline.eval_delay_us,
            r.cost_model,
            r.runs,
            num(r.s_init),
            num(r.s_opt),
            num(r.s_term)
        );
    }
    out
}

/// Curve for `cost_model`; headers only if the summary has none.
pub fn curve_csv(s: &Summary, cost_model: &str) -> String {
    let Some(c) = s.curves.iter().find(|c| c.cost_model == cost_model) else {
        return "t_ms\n".to_string();
    };
    let mut out = String::from("t_ms");
    for v in c.series.keys() {
        let _ = write!(out, ",{}", v.label());
    }
    out.push('\n');
    for (k, t) in c.times_ms.iter().enumerate() {
        let _ = write!(out, "{t:.6}");
        for vals in c.series.values() {
            let _ = write!(out, ",{:.6}", vals[k]);
        }
        out.push('\n');
    }
    out
}

pub fn runs_ndjson(runs: &[RunMetrics]) -> String {
    let mut out = String::new();
    for r in runs {
        out.push_str(&serde_json::to_string(r).expect("run metrics serialize"));
        out.push('\n');
    }
    out
}

pub fn read_runs_ndjson(text: &str) -> Result<Vec<RunMetrics>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Write `table1.csv`, `speedup.csv`, `anytime_curve_<cost>.csv` for both
/// cost models (and any other present) and `runs.ndjson` into `out_dir`.
pub fn emit_outputs(summary: &Summary, runs: &[RunMetrics], out_dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("table1.csv"), table1_csv(summary))?;
    std::fs::write(out_dir.join("speedup.csv"), speedup_csv(summary))?;
    let mut models: Vec<String> = [CostKind::Euclidean, CostKind::RandomFactor]
        .iter()
        .map(|k| k.as_str().to_string())
        .collect();
    for c in &summary.curves {
        if !models.contains(&c.cost_model) {
            models.push(c.cost_model.clone());
        }
    }
    for m in models {
        std::fs::write(
            out_dir.join(format!("anytime_curve_{m}.csv")),
            curve_csv(summary, &m),
        )?;
    }
    std::fs::write(out_dir.join("runs.ndjson"), runs_ndjson(runs))?;
    Ok(())
}
