use aepase_grid::collision::{collision_free, interpolate, placement_free, sweep_oracle};
use aepase_grid::{GridMap, GridState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_map(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> GridMap {
    let cells: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(density)).collect();
    GridMap::from_fn("random", w, h, |x, y| cells[y * w + x])
}

#[test]
fn matches_cell_sweep_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut free = 0;
    for _ in 0..1000 {
        let (w, h) = (rng.gen_range(4..40), rng.gen_range(4..40));
        let density = rng.gen_range(0.0..0.15);
        let map = random_map(&mut rng, w, h, density);
        let side = rng.gen_range(1..6);
        let step = rng.gen_range(1..4);
        let p = |rng: &mut ChaCha8Rng| {
            GridState::new(
                rng.gen_range(-2..w as i32 + 2),
                rng.gen_range(-2..h as i32 + 2),
            )
        };
        let (a, b) = (p(&mut rng), p(&mut rng));
        let fast = collision_free(&map, a, b, side, step);
        assert_eq!(
            fast,
            sweep_oracle(&map, a, b, side, step),
            "{a} -> {b} side {side} step {step}"
        );
        free += fast as usize;
    }
    assert!(free > 50, "too few free cases to be meaningful: {free}");
}

#[test]
fn wall_blocks_crossing() {
    let map = GridMap::from_fn("wall", 20, 20, |x, _| x == 10);
    let (a, b) = (GridState::new(2, 5), GridState::new(15, 5));
    assert!(!collision_free(&map, a, b, 2, 1));
    assert!(collision_free(&map, a, GridState::new(8, 5), 2, 1));
    assert!(!collision_free(&map, a, GridState::new(9, 5), 2, 1));
}

#[test]
fn placement_needs_in_bounds_footprint() {
    let map = GridMap::from_fn("open", 10, 10, |_, _| false);
    assert!(placement_free(&map, GridState::new(8, 8), 2));
    assert!(!placement_free(&map, GridState::new(9, 8), 2));
    assert!(!placement_free(&map, GridState::new(-1, 0), 1));
}

proptest! {
    #[test]
    fn direction_does_not_matter(
        ax in 0i32..30, ay in 0i32..30, bx in 0i32..30, by in 0i32..30,
        step in 1usize..5, side in 1usize..4, seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, 32, 32, 0.05);
        let (a, b) = (GridState::new(ax, ay), GridState::new(bx, by));
        prop_assert_eq!(collision_free(&map, a, b, side, step), collision_free(&map, b, a, side, step));
        let pts = interpolate(a, b, step);
        prop_assert!(pts.contains(&a) && pts.contains(&b));
    }
}
