//! Square-footprint collision checking along straight segments.

use crate::map::GridMap;
use crate::GridState;

/// Whether the `side x side` footprint anchored at its minimum corner `s`
/// lies in bounds on free cells.
pub fn placement_free(map: &GridMap, s: GridState, side: usize) -> bool {
    if s.x < 0 || s.y < 0 {
        return false;
    }
    let (x, y) = (s.x as usize, s.y as usize);
    x + side <= map.width && y + side <= map.height && map.blocked_in(x, y, x + side, y + side) == 0
}

/// Anchor cells sampled along `from -> to`: parameter values `0, step,
/// 2*step, ...` below the Chebyshev length, then the endpoint. A sample at
/// parameter `t` rounds `from + d*t/len` to the nearest cell, halves up.
///
/// The segment is walked from its lexicographically smaller endpoint so that
/// the sample set does not depend on direction.
pub fn interpolate(from: GridState, to: GridState, step: usize) -> Vec<GridState> {
    assert!(step >= 1);
    let (a, b) = if (from.x, from.y) <= (to.x, to.y) {
        (from, to)
    } else {
        (to, from)
    };
    let (dx, dy) = ((b.x - a.x) as i64, (b.y - a.y) as i64);
    let len = dx.abs().max(dy.abs());
    if len == 0 {
        return vec![a];
    }
    let at = |t: i64| {
        let r = |d: i64| (2 * t * d + len).div_euclid(2 * len);
        GridState::new(a.x + r(dx) as i32, a.y + r(dy) as i32)
    };
    let mut out: Vec<GridState> = (0..len).step_by(step).map(at).collect();
    out.push(b);
    out
}

/// True iff every sampled footprint placement along the segment is free.
pub fn collision_free(
    map: &GridMap,
    from: GridState,
    to: GridState,
    side: usize,
    step: usize,
) -> bool {
    interpolate(from, to, step)
        .into_iter()
        .all(|s| placement_free(map, s, side))
}

/// Cell-by-cell reference for [`collision_free`]: no summed-area table, no
/// early bounds shortcut.
pub fn sweep_oracle(
    map: &GridMap,
    from: GridState,
    to: GridState,
    side: usize,
    step: usize,
) -> bool {
    for s in interpolate(from, to, step) {
        for oy in 0..side as i64 {
            for ox in 0..side as i64 {
                if map.is_blocked(s.x as i64 + ox, s.y as i64 + oy) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(x: i32, y: i32) -> GridState {
        GridState::new(x, y)
    }

    #[test]
    fn unit_footprint_adjacent_cells() {
        let m = GridMap::from_fn("open", 4, 4, |_, _| false);
        assert!(collision_free(&m, gs(1, 1), gs(2, 1), 1, 1));
        assert!(collision_free(&m, gs(1, 1), gs(1, 1), 1, 1));
    }

    #[test]
    fn midpoint_obstacle_blocks() {
        let m = GridMap::from_fn("dot", 9, 3, |x, y| x == 4 && y == 1);
        assert!(!collision_free(&m, gs(0, 1), gs(8, 1), 1, 1));
        // A coarse step can jump over it; the endpoints are still checked.
        assert!(collision_free(&m, gs(0, 1), gs(8, 1), 1, 3));
        assert!(collision_free(&m, gs(0, 0), gs(8, 0), 1, 1));
        assert!(!collision_free(&m, gs(0, 0), gs(8, 0), 2, 1));
    }

    #[test]
    fn samples_include_both_endpoints() {
        let s = interpolate(gs(0, 0), gs(5, 2), 2);
        assert_eq!(s.first(), Some(&gs(0, 0)));
        assert_eq!(s.last(), Some(&gs(5, 2)));
        assert_eq!(s.len(), 4);
        let mut r = interpolate(gs(5, 2), gs(0, 0), 2);
        r.sort_by_key(|s| (s.x, s.y));
        let mut f = s.clone();
        f.sort_by_key(|s| (s.x, s.y));
        assert_eq!(r, f);
    }

    #[test]
    fn out_of_bounds_footprint_collides() {
        let m = GridMap::from_fn("open", 4, 4, |_, _| false);
        assert!(placement_free(&m, gs(2, 2), 2));
        assert!(!placement_free(&m, gs(3, 2), 2));
        assert!(!placement_free(&m, gs(-1, 0), 1));
    }
}
