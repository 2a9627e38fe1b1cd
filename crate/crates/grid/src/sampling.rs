use std::sync::Arc;

use aepase_core::baselines::dijkstra_all;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::CostModel;
use crate::domain::{GridDomain, GridDomainConfig, GridError};
use crate::map::GridMap;
use crate::GridState;

/// Rejection-sampling budget per pair.
pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("no connected start/goal pair for pair {pair} after {attempts} attempts")]
    TooConstrained { pair: usize, attempts: usize },
    #[error(transparent)]
    Config(#[from] GridError),
}

/// `count` start/goal pairs with collision-free, distinct, connected
/// endpoints. The goal is drawn uniformly from the states a Dijkstra sweep
/// reaches from the start, so every pair is solvable by construction.
pub fn sample_start_goal_pairs(
    map: &Arc<GridMap>,
    cfg: &GridDomainConfig,
    count: usize,
    seed: u64,
) -> Result<Vec<(GridState, GridState)>, SampleError> {
    let domain = GridDomain::new(map.clone(), Arc::new(CostModel::euclidean()), cfg.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = cfg.footprint_side;
    let mut pairs = Vec::with_capacity(count);
    if map.width < side || map.height < side {
        return if count == 0 {
            Ok(pairs)
        } else {
            Err(SampleError::TooConstrained {
                pair: 0,
                attempts: 0,
            })
        };
    }
    for pair in 0..count {
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let start = GridState::new(
                rng.gen_range(0..=(map.width - side) as i32),
                rng.gen_range(0..=(map.height - side) as i32),
            );
            if !domain.placement_free(start) {
                continue;
            }
            let mut reachable: Vec<GridState> = dijkstra_all(&domain, start)
                .into_keys()
                .filter(|s| *s != start)
                .collect();
            if reachable.is_empty() {
                continue;
            }
            reachable.sort_by_key(|s| (s.y, s.x));
            found = Some((start, reachable[rng.gen_range(0..reachable.len())]));
            break;
        }
        match found {
            Some(p) => pairs.push(p),
            None => {
                return Err(SampleError::TooConstrained {
                    pair,
                    attempts: MAX_ATTEMPTS,
                })
            }
        }
    }
    Ok(pairs)
}
