use std::sync::Arc;
use std::time::{Duration, Instant};

use aepase_core::{ActionId, Domain, Outcome};
use thiserror::Error;

use crate::collision::{collision_free, placement_free};
use crate::cost::{euclidean, CostModel};
use crate::map::GridMap;
use crate::GridState;

/// Unit direction of each action: N, NE, E, SE, S, SW, W, NW (y grows down).
pub const DIRECTIONS: [(i32, i32); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

#[derive(Clone, Debug, PartialEq)]
pub struct GridDomainConfig {
    pub footprint_side: usize,
    pub move_length: usize,
    pub collision_step: usize,
    /// Simulated latency added to every edge evaluation.
    pub eval_delay: Duration,
}

impl Default for GridDomainConfig {
    fn default() -> Self {
        GridDomainConfig {
            footprint_side: 32,
            move_length: 25,
            collision_step: 1,
            eval_delay: Duration::ZERO,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("footprint_side, move_length and collision_step must be positive")]
    ZeroParameter,
    #[error("collision_step {step} exceeds move_length {len}")]
    StepTooLong { step: usize, len: usize },
    #[error("map {map_w}x{map_h} does not match the cost model {cost_w}x{cost_h}")]
    CostMapShape {
        map_w: usize,
        map_h: usize,
        cost_w: usize,
        cost_h: usize,
    },
}

impl GridDomainConfig {
    pub fn validate(&self) -> Result<(), GridError> {
        if self.footprint_side == 0 || self.move_length == 0 || self.collision_step == 0 {
            return Err(GridError::ZeroParameter);
        }
        if self.collision_step > self.move_length {
            return Err(GridError::StepTooLong {
                step: self.collision_step,
                len: self.move_length,
            });
        }
        Ok(())
    }
}

/// A map, footprint and cost model with an optional goal. Without a goal the
/// heuristic is zero and no state is a goal, which suits reachability sweeps.
#[derive(Clone, Debug)]
pub struct GridDomain {
    pub map: Arc<GridMap>,
    pub cost: Arc<CostModel>,
    pub cfg: GridDomainConfig,
    pub goal: Option<GridState>,
}

impl GridDomain {
    pub fn new(
        map: Arc<GridMap>,
        cost: Arc<CostModel>,
        cfg: GridDomainConfig,
    ) -> Result<Self, GridError> {
        cfg.validate()?;
        if let crate::cost::CostKind::RandomFactor = cost.kind {
            let (cw, ch) = cost.shape();
            if (cw, ch) != (map.width, map.height) {
                return Err(GridError::CostMapShape {
                    map_w: map.width,
                    map_h: map.height,
                    cost_w: cw,
                    cost_h: ch,
                });
            }
        }
        Ok(GridDomain {
            map,
            cost,
            cfg,
            goal: None,
        })
    }

    pub fn with_goal(&self, goal: GridState) -> Self {
        GridDomain {
            goal: Some(goal),
            ..self.clone()
        }
    }

    pub fn placement_free(&self, s: GridState) -> bool {
        placement_free(&self.map, s, self.cfg.footprint_side)
    }

    /// Outcome of action `a` from `s`, without the simulated delay.
    pub fn successor(&self, s: GridState, a: usize) -> Outcome<GridState> {
        let (dx, dy) = DIRECTIONS[a];
        let l = self.cfg.move_length as i32;
        let t = GridState::new(s.x + dx * l, s.y + dy * l);
        if !self.placement_free(t)
            || !collision_free(
                &self.map,
                s,
                t,
                self.cfg.footprint_side,
                self.cfg.collision_step,
            )
        {
            return Outcome::Invalid;
        }
        Outcome::Valid {
            successor: t,
            cost: self.cost.edge_cost(s, t, self.cfg.footprint_side),
        }
    }

    /// All eight outcomes in action order.
    pub fn successors(&self, s: GridState) -> [Outcome<GridState>; 8] {
        std::array::from_fn(|a| self.successor(s, a))
    }
}

/// Busy-wait the final stretch so that the delay overshoots by microseconds,
/// not by a scheduler tick.
fn delay(d: Duration) {
    let until = Instant::now() + d;
    const SPIN: Duration = Duration::from_micros(200);
    if d > SPIN {
        std::thread::sleep(d - SPIN);
    }
    // Yielding keeps concurrent delays accurate on oversubscribed cores.
    while Instant::now() < until {
        std::thread::yield_now();
    }
}

impl Domain for GridDomain {
    type State = GridState;

    fn actions(&self, _: &GridState) -> Vec<ActionId> {
        (0..8).map(ActionId).collect()
    }

    fn evaluate(&self, s: &GridState, a: ActionId) -> Outcome<GridState> {
        if !self.cfg.eval_delay.is_zero() {
            delay(self.cfg.eval_delay);
        }
        self.successor(*s, a.0 as usize)
    }

    fn heuristic(&self, s: &GridState) -> f64 {
        self.goal.map_or(0.0, |g| euclidean(*s, g))
    }

    fn pairwise_heuristic(&self, a: &GridState, b: &GridState) -> f64 {
        euclidean(*a, *b)
    }

    fn is_goal(&self, s: &GridState) -> bool {
        self.goal == Some(*s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostKind;

    fn open_domain(side: usize, len: usize) -> GridDomain {
        let map = Arc::new(GridMap::from_fn("open", 100, 100, |_, _| false));
        let cfg = GridDomainConfig {
            footprint_side: side,
            move_length: len,
            ..GridDomainConfig::default()
        };
        GridDomain::new(map, Arc::new(CostModel::euclidean()), cfg).unwrap()
    }

    #[test]
    fn interior_cell_has_eight_moves() {
        let d = open_domain(32, 25);
        let out = d.successors(GridState::new(34, 34));
        let costs: Vec<f64> = out.iter().map(|o| o.cost().unwrap()).collect();
        for (a, c) in costs.iter().enumerate() {
            let expected = if a % 2 == 0 { 25.0 } else { 25.0 * 2f64.sqrt() };
            assert!((c - expected).abs() < 1e-9, "action {a}: {c}");
        }
        assert_eq!(out[2].successor(), Some(&GridState::new(59, 34)));
        assert_eq!(out[0].successor(), Some(&GridState::new(34, 9)));
    }

    #[test]
    fn corner_moves_leave_the_map() {
        let d = open_domain(32, 25);
        let out = d.successors(GridState::new(0, 0));
        let valid: Vec<usize> = (0..8).filter(|&a| out[a].is_valid()).collect();
        assert_eq!(valid, vec![2, 3, 4]);
    }

    #[test]
    fn heuristic_examples() {
        let d = open_domain(1, 1).with_goal(GridState::new(3, 4));
        assert_eq!(d.heuristic(&GridState::new(0, 0)), 5.0);
        assert_eq!(
            d.pairwise_heuristic(&GridState::new(3, 3), &GridState::new(3, 3)),
            0.0
        );
        assert!(d.is_goal(&GridState::new(3, 4)));
    }

    #[test]
    fn config_validation() {
        let bad = GridDomainConfig {
            collision_step: 30,
            ..GridDomainConfig::default()
        };
        assert!(bad.validate().is_err());
        let map = Arc::new(GridMap::from_fn("m", 10, 10, |_, _| false));
        let cost = Arc::new(CostModel::new(CostKind::RandomFactor, 1, 9, 10));
        assert!(GridDomain::new(map, cost, GridDomainConfig::default()).is_err());
    }

    #[test]
    fn evaluation_delay_is_tight() {
        let mut d = open_domain(2, 4);
        d.cfg.eval_delay = Duration::from_millis(2);
        let mut times: Vec<Duration> = (0..7)
            .map(|_| {
                let t = Instant::now();
                d.evaluate(&GridState::new(10, 10), ActionId(2));
                t.elapsed()
            })
            .collect();
        times.sort();
        assert!(times[0] >= Duration::from_millis(2));
        // Median, so that one descheduling under a loaded test run is tolerated.
        assert!(times[3] <= Duration::from_micros(2500), "{times:?}");
    }
}
