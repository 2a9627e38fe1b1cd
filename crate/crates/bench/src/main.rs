use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aepase_bench::experiment::precompute_oracle;
use aepase_bench::output::read_runs_ndjson;
use aepase_bench::{
    acceptance, aggregate, emit_outputs, run_experiment, OracleCache, RunMetrics, RunStatus,
    SpecFile,
};
use aepase_grid::fixtures;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "aepase-bench",
    about = "Grid benchmarks for ePA*SE, A-ePA*SE and the serial baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of a spec and write the result files.
    Run {
        /// Spec file; built-in defaults when omitted.
        spec: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Precompute Dijkstra optimal costs for a spec into OUT/oracle.csv.
    Oracle {
        spec: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Rebuild the summary files from runs.ndjson files.
    Aggregate {
        /// Defaults to OUT/runs.ndjson.
        runs: Vec<PathBuf>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Args)]
struct Flags {
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Comma-separated thread counts.
    #[arg(long)]
    threads: Option<String>,
    /// Seed for pair sampling and the random cost map.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Fixture names or map files, comma-separated.
    #[arg(long)]
    map: Option<String>,
    /// `euclidean`, `random` or both, comma-separated.
    #[arg(long)]
    cost: Option<String>,
    /// wastar, arastar, epase, aepase_naive, aepase; comma-separated.
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    w0: Option<f64>,
    #[arg(long)]
    dw: Option<f64>,
    /// Comma-separated per-edge delays in microseconds.
    #[arg(long)]
    eval_delay_us: Option<String>,
}

const EXIT_RUN_FAILURE: u8 = 1;
const EXIT_BAD_SPEC: u8 = 2;

fn load_spec(path: Option<&Path>, flags: &Flags) -> Result<SpecFile, String> {
    let mut spec = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let dir = p.parent().unwrap_or(Path::new("."));
            SpecFile::parse(&text, dir).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => SpecFile::defaults(),
    };
    let mut set = |k: &str, v: String| spec.set(k, &v).map_err(|e| e.to_string());
    if let Some(v) = &flags.threads {
        set("threads", v.clone())?;
    }
    if let Some(v) = flags.seed {
        set("pair_seed", v.to_string())?;
        set("cost_seed", v.to_string())?;
    }
    if let Some(v) = flags.timeout_ms {
        set("timeout_ms", v.to_string())?;
    }
    if let Some(v) = &flags.map {
        let maps: Vec<String> = v
            .split(',')
            .map(str::trim)
            .map(|m| {
                let bare = !m.contains('/') && !Path::new(m).exists();
                if bare && fixtures::by_name(m).is_some() {
                    format!("fixture:{}", m.trim_end_matches(".map"))
                } else {
                    m.to_string()
                }
            })
            .collect();
        set("map", maps.join(","))?;
    }
    if let Some(v) = &flags.cost {
        set("cost", v.clone())?;
    }
    if let Some(v) = &flags.algo {
        set("algorithm", v.clone())?;
    }
    if let Some(v) = flags.w0 {
        set("w0", v.to_string())?;
    }
    if let Some(v) = flags.dw {
        set("dw", v.to_string())?;
    }
    if let Some(v) = &flags.eval_delay_us {
        set("eval_delay_us", v.clone())?;
    }
    Ok(spec)
}

fn load_oracle(out: &Path) -> OracleCache {
    let path = out.join("oracle.csv");
    if !path.exists() {
        return OracleCache::new();
    }
    match OracleCache::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ignoring {}: {e}", path.display());
            OracleCache::new()
        }
    }
}

fn run(spec: Option<PathBuf>, flags: Flags, oracle_only: bool) -> ExitCode {
    let cells = match load_spec(spec.as_deref(), &flags)
        .and_then(|s| s.expand().map_err(|e| e.to_string()))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("bad spec: {e}");
            return ExitCode::from(EXIT_BAD_SPEC);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&flags.out) {
        eprintln!("{}: {e}", flags.out.display());
        return ExitCode::from(EXIT_RUN_FAILURE);
    }
    let mut oracle = load_oracle(&flags.out);
    let mut runs: Vec<RunMetrics> = Vec::new();
    let mut failed = false;
    for (i, cell) in cells.iter().enumerate() {
        eprintln!(
            "[{}/{}] {} {} {} N_t={} delay={}us",
            i + 1,
            cells.len(),
            cell.algorithm,
            cell.map.name(),
            cell.cost.as_str(),
            cell.planner.n_threads,
            cell.grid.eval_delay.as_micros()
        );
        if oracle_only {
            if let Err(e) = precompute_oracle(cell, &mut oracle) {
                eprintln!("  {e}");
                failed = true;
            }
            continue;
        }
        match run_experiment(cell, &mut oracle) {
            Ok(r) => {
                failed |= r.iter().any(|m| m.status == RunStatus::Error);
                runs.extend(r);
            }
            Err(e) => {
                eprintln!("  {e}");
                failed = true;
            }
        }
    }
    if let Err(e) = oracle.save(&flags.out.join("oracle.csv")) {
        eprintln!("writing oracle: {e}");
        return ExitCode::from(EXIT_RUN_FAILURE);
    }
    if !oracle_only {
        if let Err(code) = summarize(&runs, &flags.out) {
            return code;
        }
    }
    if failed {
        ExitCode::from(EXIT_RUN_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn summarize(runs: &[RunMetrics], out: &Path) -> Result<(), ExitCode> {
    let summary = aggregate(runs).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(EXIT_RUN_FAILURE)
    })?;
    emit_outputs(&summary, runs, out).map_err(|e| {
        eprintln!("writing outputs: {e}");
        ExitCode::from(EXIT_RUN_FAILURE)
    })?;
    eprintln!("wrote {} runs to {}", runs.len(), out.display());
    Ok(())
}

fn aggregate_files(files: Vec<PathBuf>, out: PathBuf) -> ExitCode {
    let files = if files.is_empty() {
        vec![out.join("runs.ndjson")]
    } else {
        files
    };
    let mut runs = Vec::new();
    for f in &files {
        let parsed = std::fs::read_to_string(f)
            .map_err(|e| e.to_string())
            .and_then(|t| read_runs_ndjson(&t).map_err(|e| e.to_string()));
        match parsed {
            Ok(r) => runs.extend(r),
            Err(e) => {
                eprintln!("{}: {e}", f.display());
                return ExitCode::from(EXIT_BAD_SPEC);
            }
        }
    }
    match summarize(&runs, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { spec, flags } => run(spec, flags, false),
        Command::Oracle { spec, flags } => run(spec, flags, true),
        Command::Aggregate { runs, out } => aggregate_files(runs, out),
        Command::Selftest => {
            let verdicts = acceptance::run_all(&mut |v| println!("{}", v.line()));
            let passed = verdicts.iter().filter(|v| v.passed).count();
            println!("{passed}/{} criteria pass", verdicts.len());
            if passed == verdicts.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_RUN_FAILURE)
            }
        }
    }
}
