#![allow(dead_code)]

use std::time::Duration;

use aepase_core::{ActionId, Domain, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DIRS: [(i32, i32); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

/// Unit-step 8-connected grid with per-cell cost factors in [1, 5].
/// Diagonal moves need both adjacent straight cells free.
pub struct TestGrid {
    pub w: i32,
    pub h: i32,
    pub blocked: Vec<bool>,
    pub factor: Vec<f64>,
    pub goal: (i32, i32),
    pub delay: Duration,
}

impl TestGrid {
    pub fn random(w: i32, h: i32, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = (w * h) as usize;
        let blocked = (0..n).map(|_| rng.gen_bool(density)).collect();
        let factor = (0..n).map(|_| rng.gen_range(1.0..5.0)).collect();
        let mut g = TestGrid {
            w,
            h,
            blocked,
            factor,
            goal: (w - 1, h - 1),
            delay: Duration::ZERO,
        };
        g.set_free((0, 0));
        g.set_free(g.goal);
        g
    }

    pub fn open(w: i32, h: i32) -> Self {
        let n = (w * h) as usize;
        TestGrid {
            w,
            h,
            blocked: vec![false; n],
            factor: vec![1.0; n],
            goal: (w - 1, h - 1),
            delay: Duration::ZERO,
        }
    }

    fn idx(&self, (x, y): (i32, i32)) -> usize {
        (y * self.w + x) as usize
    }

    pub fn set_free(&mut self, c: (i32, i32)) {
        let i = self.idx(c);
        self.blocked[i] = false;
    }

    pub fn set_blocked(&mut self, c: (i32, i32)) {
        let i = self.idx(c);
        self.blocked[i] = true;
    }

    pub fn free(&self, (x, y): (i32, i32)) -> bool {
        x >= 0 && y >= 0 && x < self.w && y < self.h && !self.blocked[self.idx((x, y))]
    }

    pub fn random_free(&self, rng: &mut ChaCha8Rng) -> (i32, i32) {
        loop {
            let c = (rng.gen_range(0..self.w), rng.gen_range(0..self.h));
            if self.free(c) {
                return c;
            }
        }
    }
}

pub fn octile(a: (i32, i32), b: (i32, i32)) -> f64 {
    let dx = (a.0 - b.0).abs() as f64;
    let dy = (a.1 - b.1).abs() as f64;
    dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy)
}

impl Domain for TestGrid {
    type State = (i32, i32);

    fn actions(&self, _: &(i32, i32)) -> Vec<ActionId> {
        (0..8).map(ActionId).collect()
    }

    fn evaluate(&self, s: &(i32, i32), a: ActionId) -> Outcome<(i32, i32)> {
        if !self.delay.is_zero() {
            std::thread::sleep(self.delay);
        }
        let (dx, dy) = DIRS[a.0 as usize];
        let t = (s.0 + dx, s.1 + dy);
        if !self.free(t) {
            return Outcome::Invalid;
        }
        if dx != 0 && dy != 0 && (!self.free((s.0 + dx, s.1)) || !self.free((s.0, s.1 + dy))) {
            return Outcome::Invalid;
        }
        let len = if dx != 0 && dy != 0 {
            std::f64::consts::SQRT_2
        } else {
            1.0
        };
        let f = 0.5 * (self.factor[self.idx(*s)] + self.factor[self.idx(t)]);
        Outcome::Valid {
            successor: t,
            cost: len * f,
        }
    }

    fn heuristic(&self, s: &(i32, i32)) -> f64 {
        octile(*s, self.goal)
    }

    fn pairwise_heuristic(&self, a: &(i32, i32), b: &(i32, i32)) -> f64 {
        octile(*a, *b)
    }

    fn is_goal(&self, s: &(i32, i32)) -> bool {
        *s == self.goal
    }
}

pub fn rel_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}
