use std::path::Path;

use aepase_bench::aggregate::speedup;
use aepase_bench::output::{read_runs_ndjson, runs_ndjson};
use aepase_bench::{aggregate, emit_outputs, Algorithm, RunMetrics, RunStatus, Summary};

fn run(algorithm: Algorithm, pair: usize, records: &[(f64, f64)], optimal: f64) -> RunMetrics {
    let d = aepase_bench::metrics::derive(records, optimal, true);
    RunMetrics {
        algorithm,
        map: "open64".into(),
        cost_model: "random".into(),
        threads: if algorithm.is_serial() { 1 } else { 4 },
        eval_delay_us: 0,
        pair,
        repetition: 0,
        start: (0, 0),
        goal: (8, 4),
        optimal_cost: optimal,
        t_init_ms: d.t_init_ms,
        t_opt_ms: d.t_opt_ms,
        t_term_ms: d.t_term_ms,
        cost_init: d.cost_init,
        cost_final: d.cost_final,
        optimality_ratio_series: d.ratios,
        published_costs: records.iter().map(|r| r.1).collect(),
        expansions_per_iteration: vec![3; records.len()],
        status: RunStatus::ProvedOptimal,
        elapsed_ms: records.last().map_or(0.0, |r| r.0 + 0.5),
        shutdown_latency_ms: 0.1,
        error: None,
    }
}

/// Two pairs, A-ePA*SE against ARA*.
fn two_runs() -> Vec<RunMetrics> {
    vec![
        run(
            Algorithm::Aepase,
            0,
            &[(1.0, 12.0), (4.0, 10.0), (10.0, 10.0)],
            10.0,
        ),
        run(Algorithm::Aepase, 1, &[(2.0, 25.0), (30.0, 20.0)], 20.0),
        run(Algorithm::Arastar, 0, &[(3.0, 12.5), (40.0, 10.0)], 10.0),
        run(Algorithm::Arastar, 1, &[(4.0, 20.0), (30.0, 20.0)], 20.0),
    ]
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn speedups_are_averaged_per_run() {
    let runs = two_runs();
    let s = aggregate(&runs).unwrap();
    assert_eq!(s.speedups.len(), 1);
    let sp = &s.speedups[0];
    assert_eq!(sp.baseline.algorithm, Algorithm::Arastar);
    // t_term 10 and 30 against 40 and 30.
    assert_eq!(sp.s_term, Some((4.0 + 1.0) / 2.0));
    assert_eq!(sp.s_init, Some((3.0 + 2.0) / 2.0));
}

#[test]
fn speedup_against_itself_is_one() {
    let runs = two_runs();
    let a: Vec<&RunMetrics> = runs
        .iter()
        .filter(|r| r.algorithm == Algorithm::Aepase)
        .collect();
    for metric in [
        |r: &RunMetrics| r.t_init_ms,
        |r: &RunMetrics| r.t_opt_ms,
        |r: &RunMetrics| r.t_term_ms,
    ] {
        assert_eq!(speedup(&a, &a, metric), (2, Some(1.0)));
    }
}

#[test]
fn single_run_means_equal_the_run() {
    let runs = vec![two_runs().remove(0)];
    let s = aggregate(&runs).unwrap();
    let c = &s.cells[0];
    assert_eq!(
        (c.t_init_ms, c.t_opt_ms, c.t_term_ms),
        (Some(1.0), Some(4.0), Some(10.0))
    );
    assert_eq!(c.init_ratio, Some(10.0 / 12.0));
}

#[test]
fn curves_are_best_so_far_and_bucketed_by_widest_term() {
    let s = aggregate(&two_runs()).unwrap();
    let c = &s.curves[0];
    assert_eq!(c.bucket_ms, 40.0 / 200.0);
    assert_eq!(c.times_ms.len(), 201);
    for vals in c.series.values() {
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*vals.last().unwrap(), 1.0);
        assert_eq!(vals[0], 0.0);
    }
}

#[test]
fn metric_order_is_enforced() {
    let mut runs = two_runs();
    runs[0].t_opt_ms = Some(50.0);
    assert!(aggregate(&runs).is_err());
}

#[test]
fn known_summary_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs = two_runs();
    emit_outputs(&aggregate(&runs).unwrap(), &runs, dir.path()).unwrap();
    for f in [
        "table1.csv",
        "speedup.csv",
        "anytime_curve_random.csv",
        "anytime_curve_euclidean.csv",
        "runs.ndjson",
    ] {
        let got = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert_eq!(got, golden(f), "{f}");
    }
}

#[test]
fn empty_summary_writes_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    emit_outputs(&Summary::default(), &[], dir.path()).unwrap();
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("table1.csv").lines().count(), 1);
    assert_eq!(read("speedup.csv").lines().count(), 1);
    assert_eq!(read("anytime_curve_euclidean.csv"), "t_ms\n");
    assert_eq!(read("anytime_curve_random.csv"), "t_ms\n");
    assert_eq!(read("runs.ndjson"), "");
}

#[test]
fn rerun_overwrites_with_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs = two_runs();
    let s = aggregate(&runs).unwrap();
    emit_outputs(&s, &runs, dir.path()).unwrap();
    let first = std::fs::read(dir.path().join("anytime_curve_random.csv")).unwrap();
    emit_outputs(&s, &runs, dir.path()).unwrap();
    assert_eq!(
        first,
        std::fs::read(dir.path().join("anytime_curve_random.csv")).unwrap()
    );
}

#[test]
fn runs_round_trip_through_ndjson() {
    let runs = two_runs();
    assert_eq!(read_runs_ndjson(&runs_ndjson(&runs)).unwrap(), runs);
}
