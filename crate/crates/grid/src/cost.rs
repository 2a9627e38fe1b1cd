//! Edge cost models.
//!
//! Random factor map recipe: the factor of the cell with row-major index `i`
//! is derived from the `(i + 1)`-th output of a SplitMix64 stream seeded with
//! `seed`:
//!
//! ```text
//! z = seed + (i + 1) * 0x9E3779B97F4A7C15          (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9         (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB         (wrapping)
//! z =  z ^ (z >> 31)
//! factor = 1 + 99 * (z >> 11) / 2^53               in [1, 100)
//! ```

use std::fmt::Write as _;

use crate::GridState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CostKind {
    Euclidean,
    RandomFactor,
}

impl CostKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CostKind::Euclidean => "euclidean",
            CostKind::RandomFactor => "random",
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(CostKind::Euclidean),
            "random" | "random_factor" => Ok(CostKind::RandomFactor),
            _ => Err(format!("unknown cost model {s:?}")),
        }
    }
}

pub fn factor_value(seed: u64, index: usize) -> f64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    1.0 + 99.0 * ((z >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
}

/// Straight-line distance in cell units. Also the heuristic, so that an
/// unobstructed straight move costs exactly its heuristic value.
pub fn euclidean(a: GridState, b: GridState) -> f64 {
    let dx = (a.x - b.x) as i64;
    let dy = (a.y - b.y) as i64;
    ((dx * dx + dy * dy) as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    pub kind: CostKind,
    pub seed: u64,
    width: usize,
    height: usize,
    factors: Vec<f64>,
}

impl CostModel {
    pub fn euclidean() -> Self {
        CostModel {
            kind: CostKind::Euclidean,
            seed: 0,
            width: 0,
            height: 0,
            factors: Vec::new(),
        }
    }

    pub fn random_factor(seed: u64, width: usize, height: usize) -> Self {
        CostModel {
            kind: CostKind::RandomFactor,
            seed,
            width,
            height,
            factors: (0..width * height).map(|i| factor_value(seed, i)).collect(),
        }
    }

    pub fn new(kind: CostKind, seed: u64, width: usize, height: usize) -> Self {
        match kind {
            CostKind::Euclidean => Self::euclidean(),
            CostKind::RandomFactor => Self::random_factor(seed, width, height),
        }
    }

    /// `(width, height)` of the factor map; zero for the euclidean model.
    pub fn shape(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// 1 everywhere under the euclidean model.
    pub fn factor(&self, x: usize, y: usize) -> f64 {
        match self.kind {
            CostKind::Euclidean => 1.0,
            CostKind::RandomFactor => self.factors[y * self.width + x],
        }
    }

    /// Mean factor over the `side x side` footprints at both endpoints.
    fn mean_factor(&self, a: GridState, b: GridState, side: usize) -> f64 {
        // Fixed endpoint order keeps the sum bit-identical in both directions.
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let mut sum = 0.0;
        for s in [a, b] {
            for y in s.y as usize..s.y as usize + side {
                for x in s.x as usize..s.x as usize + side {
                    sum += self.factor(x, y);
                }
            }
        }
        sum / (2 * side * side) as f64
    }

    /// Cost of the straight move `a -> b`. Both footprints must be in bounds.
    pub fn edge_cost(&self, a: GridState, b: GridState, side: usize) -> f64 {
        let len = euclidean(a, b);
        match self.kind {
            CostKind::Euclidean => len,
            CostKind::RandomFactor => len * self.mean_factor(a, b, side),
        }
    }

    /// One text row per map row, space-separated, six decimals.
    pub fn export_factor_map(&self) -> String {
        let mut out = String::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if x > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{:.6}", self.factor(x, y));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_are_in_range_and_reproducible() {
        let a = CostModel::random_factor(42, 100, 100);
        let b = CostModel::random_factor(42, 100, 100);
        assert_eq!(a, b);
        assert!(a.factors.iter().all(|f| (1.0..100.0).contains(f)));
        let mean: f64 = a.factors.iter().sum::<f64>() / a.factors.len() as f64;
        assert!((mean - 50.5).abs() < 1.5, "{mean}");
        assert_ne!(a, CostModel::random_factor(43, 100, 100));
    }

    #[test]
    fn golden_factor_value() {
        // Seed 42, cell (0, 0): 74.4149229984105.
        assert_eq!(factor_value(42, 0).to_bits(), 0x4052_9a8e_1931_2202);
        assert_eq!(
            CostModel::random_factor(42, 100, 100).factor(0, 0),
            factor_value(42, 0)
        );
    }

    #[test]
    fn euclidean_costs() {
        let s = GridState::new(10, 10);
        let m = CostModel::euclidean();
        assert_eq!(m.edge_cost(s, GridState::new(35, 10), 1), 25.0);
        let d = m.edge_cost(s, GridState::new(35, 35), 1);
        assert!((d - 25.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(euclidean(GridState::new(0, 0), GridState::new(3, 4)), 5.0);
        assert_eq!(euclidean(s, s), 0.0);
    }

    #[test]
    fn random_cost_is_symmetric_and_lower_bounded() {
        let m = CostModel::random_factor(7, 20, 20);
        for (a, b) in [((0, 0), (4, 0)), ((3, 5), (7, 9)), ((10, 2), (6, 6))] {
            let (a, b) = (GridState::new(a.0, a.1), GridState::new(b.0, b.1));
            let c = m.edge_cost(a, b, 3);
            assert_eq!(c, m.edge_cost(b, a, 3));
            assert!(c >= euclidean(a, b));
        }
    }

    #[test]
    fn export_shape() {
        let m = CostModel::random_factor(1, 3, 2);
        let text = m.export_factor_map();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().all(|l| l.split(' ').count() == 3));
    }
}
