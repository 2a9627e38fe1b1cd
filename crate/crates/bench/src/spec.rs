//! Flat `key = value` experiment specs.
//!
//! One assignment per line; `#` starts a comment. The keys `algorithm`,
//! `map`, `cost`, `threads` and `eval_delay_us` take comma-separated lists and
//! the file expands to their cartesian product. Maps are either `fixture:NAME`
//! or a path to a `.map` file, resolved against the spec file's directory.
//!
//! ```text
//! algorithm = aepase, arastar
//! map = fixture:open64, fixture:maze128
//! cost = euclidean, random
//! threads = 1, 8
//! pairs = 10
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use aepase_core::{EpsilonPolicy, PlannerConfig};
use aepase_grid::{fixtures, CostKind, GridDomainConfig, GridMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Wastar,
    Arastar,
    Epase,
    AepaseNaive,
    Aepase,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Wastar,
        Algorithm::Arastar,
        Algorithm::Epase,
        Algorithm::AepaseNaive,
        Algorithm::Aepase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Wastar => "wastar",
            Algorithm::Arastar => "arastar",
            Algorithm::Epase => "epase",
            Algorithm::AepaseNaive => "aepase_naive",
            Algorithm::Aepase => "aepase",
        }
    }

    /// Whether the algorithm ignores `threads`.
    pub fn is_serial(self) -> bool {
        matches!(self, Algorithm::Wastar | Algorithm::Arastar)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSource {
    Fixture(String),
    File(PathBuf),
}

impl MapSource {
    pub fn name(&self) -> String {
        match self {
            MapSource::Fixture(n) => n.clone(),
            MapSource::File(p) => p.file_stem().map_or_else(
                || p.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            ),
        }
    }

    pub fn load(&self) -> Result<GridMap, String> {
        let name = self.name();
        let text = match self {
            MapSource::Fixture(n) => fixtures::by_name(n)
                .ok_or_else(|| format!("unknown fixture {n:?}"))?
                .to_string(),
            MapSource::File(p) => {
                std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?
            }
        };
        GridMap::parse_named(&name, &text).map_err(|e| format!("{name}: {e}"))
    }
}

/// One cell of the experiment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub map: MapSource,
    pub cost: CostKind,
    pub cost_seed: u64,
    pub planner: PlannerConfig,
    /// Weight of the single-shot algorithms (`wastar`, `epase`).
    pub weight: f64,
    pub grid: GridDomainConfig,
    pub pairs: usize,
    pub pair_seed: u64,
    pub repetitions: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("{key}: {message}")]
    BadValue { key: String, message: String },
    #[error("map file {0} does not exist")]
    MissingFile(PathBuf),
}

const KEYS: [&str; 17] = [
    "algorithm",
    "map",
    "cost",
    "cost_seed",
    "w0",
    "dw",
    "weight",
    "epsilon",
    "threads",
    "timeout_ms",
    "footprint",
    "move_length",
    "collision_step",
    "eval_delay_us",
    "pairs",
    "pair_seed",
    "repetitions",
];

/// Defaults for every key; a spec file only lists what it changes.
pub const DEFAULTS: &str = "\
algorithm = aepase
map = fixture:open64, fixture:maze128
cost = euclidean, random
cost_seed = 1
w0 = 50
dw = 0.5
weight = 1
epsilon = w
threads = 1, 4, 8
timeout_ms = 600000
footprint = 2
move_length = 4
collision_step = 1
eval_delay_us = 0, 2000
pairs = 10
pair_seed = 1
repetitions = 1
";

/// A parsed spec: raw values per key, expanded on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecFile {
    values: BTreeMap<String, String>,
    base_dir: PathBuf,
}

impl SpecFile {
    /// Defaults overlaid with `text`; relative map paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<SpecFile, SpecError> {
        let mut spec = SpecFile {
            values: BTreeMap::new(),
            base_dir: base_dir.to_path_buf(),
        };
        spec.merge(DEFAULTS)?;
        spec.merge(text)?;
        Ok(spec)
    }

    pub fn defaults() -> SpecFile {
        SpecFile::parse("", Path::new(".")).expect("built-in defaults parse")
    }

    fn merge(&mut self, text: &str) -> Result<(), SpecError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(SpecError::Syntax { line: i + 1 })?;
            self.set(k.trim(), v.trim())
                .map_err(|_| SpecError::UnknownKey {
                    line: i + 1,
                    key: k.trim().to_string(),
                })?;
        }
        Ok(())
    }

    /// Override one key, as the CLI flags do.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SpecError> {
        if !KEYS.contains(&key) {
            return Err(SpecError::UnknownKey {
                line: 0,
                key: key.to_string(),
            });
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn one<T: FromStr>(&self, key: &str) -> Result<T, SpecError>
    where
        T::Err: fmt::Display,
    {
        parse_value(key, self.raw(key))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, SpecError>
    where
        T::Err: fmt::Display,
    {
        let items: Vec<T> = self
            .raw(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_value(key, s))
            .collect::<Result<_, _>>()?;
        if items.is_empty() {
            return Err(bad(key, "empty list"));
        }
        Ok(items)
    }

    fn map_source(&self, v: &str) -> Result<MapSource, SpecError> {
        if let Some(name) = v.strip_prefix("fixture:") {
            if fixtures::by_name(name).is_none() {
                return Err(bad("map", format!("unknown fixture {name:?}")));
            }
            return Ok(MapSource::Fixture(name.to_string()));
        }
        let p = self.base_dir.join(v);
        if !p.is_file() {
            return Err(SpecError::MissingFile(p));
        }
        Ok(MapSource::File(p))
    }

    /// Validate every value and expand the list-valued keys.
    pub fn expand(&self) -> Result<Vec<RunSpec>, SpecError> {
        let algorithms: Vec<Algorithm> = self.list("algorithm")?;
        let maps = self
            .raw("map")
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|v| self.map_source(v))
            .collect::<Result<Vec<_>, _>>()?;
        if maps.is_empty() {
            return Err(bad("map", "empty list"));
        }
        let costs: Vec<CostKind> = self.list("cost")?;
        let threads: Vec<usize> = self.list("threads")?;
        let delays: Vec<u64> = self.list("eval_delay_us")?;

        let epsilon = match self.raw("epsilon") {
            "w" => EpsilonPolicy::EqualToW,
            v => EpsilonPolicy::Fixed(parse_value("epsilon", v)?),
        };
        let base = PlannerConfig {
            w0: self.one("w0")?,
            delta_w: self.one("dw")?,
            epsilon,
            n_threads: 1,
            time_budget: Duration::from_millis(self.one("timeout_ms")?),
            rng_seed: self.one("pair_seed")?,
            ..PlannerConfig::default()
        };
        base.validate().map_err(|e| bad("planner", e))?;
        let weight: f64 = self.one("weight")?;
        if !(weight >= 1.0) {
            return Err(bad("weight", "must be at least 1"));
        }
        let repetitions: usize = self.one("repetitions")?;
        if repetitions == 0 {
            return Err(bad("repetitions", "must be at least 1"));
        }
        if threads.contains(&0) {
            return Err(bad("threads", "must be at least 1"));
        }
        let grid = GridDomainConfig {
            footprint_side: self.one("footprint")?,
            move_length: self.one("move_length")?,
            collision_step: self.one("collision_step")?,
            eval_delay: Duration::ZERO,
        };
        grid.validate().map_err(|e| bad("grid", e))?;
        let (pairs, pair_seed, cost_seed) = (
            self.one("pairs")?,
            self.one("pair_seed")?,
            self.one("cost_seed")?,
        );

        let mut out = Vec::new();
        for &algorithm in &algorithms {
            for map in &maps {
                for &cost in &costs {
                    for &n_threads in &threads {
                        for &delay in &delays {
                            out.push(RunSpec {
                                algorithm,
                                map: map.clone(),
                                cost,
                                cost_seed,
                                planner: PlannerConfig {
                                    n_threads,
                                    ..base.clone()
                                },
                                weight,
                                grid: GridDomainConfig {
                                    eval_delay: Duration::from_micros(delay),
                                    ..grid.clone()
                                },
                                pairs,
                                pair_seed,
                                repetitions,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn bad(key: &str, message: impl fmt::Display) -> SpecError {
    SpecError::BadValue {
        key: key.to_string(),
        message: message.to_string(),
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, SpecError>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| bad(key, format!("{v:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_expand_to_desk_grid() {
        let runs = SpecFile::defaults().expand().unwrap();
        // 2 maps x 2 costs x 3 thread counts x 2 delays.
        assert_eq!(runs.len(), 24);
        assert!(runs
            .iter()
            .all(|r| r.algorithm == Algorithm::Aepase && r.pairs == 10));
    }

    #[test]
    fn overrides_and_lists() {
        let text =
            "algorithm = epase, wastar # two\nthreads = 2\neval_delay_us = 5\ncost = random\n";
        let runs = SpecFile::parse(text, Path::new("."))
            .unwrap()
            .expand()
            .unwrap();
        assert_eq!(runs.len(), 4);
        assert!(runs.iter().all(|r| r.planner.n_threads == 2));
        assert!(runs
            .iter()
            .all(|r| r.grid.eval_delay == Duration::from_micros(5)));
        assert_eq!(runs[0].algorithm, Algorithm::Epase);
    }

    #[test]
    fn errors() {
        let p = |t: &str| SpecFile::parse(t, Path::new(".")).and_then(|s| s.expand());
        assert_eq!(p("nonsense"), Err(SpecError::Syntax { line: 1 }));
        assert!(matches!(
            p("\nbogus = 1"),
            Err(SpecError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(p("w0 = 0.5"), Err(SpecError::BadValue { .. })));
        assert!(matches!(
            p("repetitions = 0"),
            Err(SpecError::BadValue { .. })
        ));
        assert!(matches!(
            p("algorithm = dfs"),
            Err(SpecError::BadValue { .. })
        ));
        assert!(matches!(
            p("map = missing.map"),
            Err(SpecError::MissingFile(_))
        ));
        assert!(matches!(
            p("map = fixture:nope"),
            Err(SpecError::BadValue { .. })
        ));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>(), Ok(a));
        }
    }
}
