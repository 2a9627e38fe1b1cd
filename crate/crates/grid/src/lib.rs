//! 2D grid benchmark domain: MovingAI maps, a square footprint moving in
//! eight directions by a fixed number of cells, and two cost models.

pub mod collision;
pub mod cost;
pub mod domain;
pub mod fixtures;
pub mod map;
pub mod sampling;

pub use cost::{CostKind, CostModel};
pub use domain::{GridDomain, GridDomainConfig, GridError, DIRECTIONS};
pub use map::{GridMap, MapError, MapErrorKind};
pub use sampling::{sample_start_goal_pairs, SampleError};

/// Footprint anchor: the minimum-corner cell of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridState {
    pub x: i32,
    pub y: i32,
}

impl GridState {
    pub const fn new(x: i32, y: i32) -> Self {
        GridState { x, y }
    }
}

impl std::fmt::Display for GridState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}
