//! Dijkstra optimal costs, cached per instance and persisted as CSV.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use aepase_core::baselines::dijkstra;
use aepase_grid::{GridDomain, GridState};

/// Identifies one instance: map, cost model, domain geometry and endpoints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OracleKey {
    pub map: String,
    pub cost_model: String,
    pub cost_seed: u64,
    pub footprint: usize,
    pub move_length: usize,
    pub collision_step: usize,
    pub start: GridState,
    pub goal: GridState,
}

impl OracleKey {
    pub fn new(map: &str, domain: &GridDomain, start: GridState, goal: GridState) -> Self {
        OracleKey {
            map: map.to_string(),
            cost_model: domain.cost.kind.as_str().to_string(),
            cost_seed: domain.cost.seed,
            footprint: domain.cfg.footprint_side,
            move_length: domain.cfg.move_length,
            collision_step: domain.cfg.collision_step,
            start,
            goal,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleCache {
    costs: BTreeMap<OracleKey, f64>,
}

const HEADER: &str =
    "map,cost_model,cost_seed,footprint,move_length,collision_step,start_x,start_y,goal_x,goal_y,cost";

impl OracleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// Optimal cost from `start` to `domain.goal`, computed without the
    /// domain's evaluation delay. Infinite if unreachable.
    pub fn cost(&mut self, map: &str, domain: &GridDomain, start: GridState) -> f64 {
        let goal = domain.goal.expect("oracle needs a goal");
        let key = OracleKey::new(map, domain, start, goal);
        *self.costs.entry(key).or_insert_with(|| {
            let mut fast = domain.clone();
            fast.cfg.eval_delay = std::time::Duration::ZERO;
            dijkstra(&fast, start).cost
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for (k, c) in &self.costs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{:?}\n",
                k.map,
                k.cost_model,
                k.cost_seed,
                k.footprint,
                k.move_length,
                k.collision_step,
                k.start.x,
                k.start.y,
                k.goal.x,
                k.goal.y,
                c
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err("oracle file: unexpected header".into());
        }
        let mut costs = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(format!("oracle file line {}: expected 11 fields", i + 2));
            }
            let num = |j: usize| -> Result<i64, String> {
                f[j].parse()
                    .map_err(|e| format!("oracle file line {}: {e}", i + 2))
            };
            let key = OracleKey {
                map: f[0].to_string(),
                cost_model: f[1].to_string(),
                cost_seed: num(2)? as u64,
                footprint: num(3)? as usize,
                move_length: num(4)? as usize,
                collision_step: num(5)? as usize,
                start: GridState::new(num(6)? as i32, num(7)? as i32),
                goal: GridState::new(num(8)? as i32, num(9)? as i32),
            };
            let cost: f64 = f[10]
                .parse()
                .map_err(|e| format!("oracle file line {}: {e}", i + 2))?;
            costs.insert(key, cost);
        }
        Ok(OracleCache { costs })
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}
