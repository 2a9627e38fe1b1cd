//! Indexed binary min-heap of edges with decrease-key.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::domain::Edge;

/// One OPEN entry. `h` is the heuristic of the source state, carried for
/// tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueueEntry {
    pub edge: Edge,
    pub f: f64,
    pub h: f64,
}

impl QueueEntry {
    /// Total order: smaller f, then smaller h, then smaller state key, then
    /// smaller action id (the dummy action sorts last).
    pub fn order(&self, other: &QueueEntry) -> Ordering {
        self.f
            .total_cmp(&other.f)
            .then_with(|| self.h.total_cmp(&other.h))
            .then_with(|| self.edge.cmp(&other.edge))
    }

    #[inline]
    fn before(&self, other: &QueueEntry) -> bool {
        self.order(other) == Ordering::Less
    }
}

/// Priority queue of edges keyed by f. Holds at most one entry per edge.
#[derive(Clone, Debug, Default)]
pub struct OpenQueue {
    heap: Vec<QueueEntry>,
    pos: HashMap<Edge, usize>,
}

impl OpenQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.pos.contains_key(edge)
    }

    pub fn get(&self, edge: &Edge) -> Option<&QueueEntry> {
        self.pos.get(edge).map(|&i| &self.heap[i])
    }

    pub fn peek(&self) -> Option<&QueueEntry> {
        self.heap.first()
    }

    /// Smallest key, or +inf when empty.
    pub fn min_f(&self) -> f64 {
        self.heap.first().map_or(f64::INFINITY, |e| e.f)
    }

    /// Insert `edge`, or move it to its new key if already present.
    /// Returns true if the edge was newly inserted.
    pub fn push_or_update(&mut self, edge: Edge, f: f64, h: f64) -> bool {
        let entry = QueueEntry { edge, f, h };
        match self.pos.get(&edge).copied() {
            Some(i) => {
                let old = self.heap[i];
                self.heap[i] = entry;
                if entry.before(&old) {
                    self.sift_up(i);
                } else {
                    self.sift_down(i);
                }
                false
            }
            None => {
                let i = self.heap.len();
                self.heap.push(entry);
                self.pos.insert(edge, i);
                self.sift_up(i);
                true
            }
        }
    }

    pub fn pop(&mut self) -> Option<QueueEntry> {
        if self.heap.is_empty() {
            return None;
        }
        Some(self.remove_at(0))
    }

    pub fn remove(&mut self, edge: &Edge) -> Option<QueueEntry> {
        let i = self.pos.get(edge).copied()?;
        Some(self.remove_at(i))
    }

    /// Entries in heap-array order (not sorted).
    pub fn iter(&self) -> impl Iterator<Item = &QueueEntry> {
        self.heap.iter()
    }

    /// Entries in priority order.
    pub fn sorted(&self) -> Vec<QueueEntry> {
        let mut v = self.heap.clone();
        v.sort_by(|a, b| a.order(b));
        v
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.pos.clear();
    }

    /// Recompute every key with `key_of` and restore heap order.
    pub fn rekey(&mut self, mut key_of: impl FnMut(&QueueEntry) -> f64) {
        for e in &mut self.heap {
            e.f = key_of(e);
        }
        for i in (0..self.heap.len() / 2).rev() {
            self.sift_down(i);
        }
    }

    /// Keep only entries for which `keep` holds.
    pub fn retain(&mut self, mut keep: impl FnMut(&QueueEntry) -> bool) {
        self.heap.retain(|e| keep(e));
        self.pos.clear();
        for (i, e) in self.heap.iter().enumerate() {
            self.pos.insert(e.edge, i);
        }
        for i in (0..self.heap.len() / 2).rev() {
            self.sift_down(i);
        }
    }

    /// Exhaustive structural check: heap order, index consistency, no
    /// duplicate edges.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.pos.len() != self.heap.len() {
            return Err(format!(
                "index has {} entries, heap has {}",
                self.pos.len(),
                self.heap.len()
            ));
        }
        for (i, e) in self.heap.iter().enumerate() {
            if self.pos.get(&e.edge) != Some(&i) {
                return Err(format!("edge {} at slot {i} is mis-indexed", e.edge));
            }
            if i > 0 && e.before(&self.heap[(i - 1) / 2]) {
                return Err(format!("heap order violated at slot {i}"));
            }
        }
        Ok(())
    }

    fn remove_at(&mut self, i: usize) -> QueueEntry {
        let last = self.heap.len() - 1;
        self.heap.swap(i, last);
        let out = self.heap.pop().expect("non-empty");
        self.pos.remove(&out.edge);
        if i < self.heap.len() {
            self.pos.insert(self.heap[i].edge, i);
            self.sift_up(i);
            self.sift_down(i);
        }
        out
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.heap[i].before(&self.heap[parent]) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < n && self.heap[l].before(&self.heap[best]) {
                best = l;
            }
            if r < n && self.heap[r].before(&self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos.insert(self.heap[a].edge, a);
        self.pos.insert(self.heap[b].edge, b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ActionId, StateKey};
    use proptest::prelude::*;

    fn e(s: u32, a: u32) -> Edge {
        Edge::new(StateKey(s), ActionId(a))
    }

    #[test]
    fn tie_break_prefers_smaller_h_then_key_then_action() {
        let mut q = OpenQueue::new();
        q.push_or_update(e(5, 0), 10.0, 4.0);
        q.push_or_update(e(2, 1), 10.0, 3.0);
        q.push_or_update(e(2, 0), 10.0, 3.0);
        q.push_or_update(e(1, 0), 10.0, 4.0);
        q.push_or_update(Edge::dummy(StateKey(2)), 10.0, 3.0);
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).map(|x| x.edge).collect();
        assert_eq!(
            order,
            vec![e(2, 0), e(2, 1), Edge::dummy(StateKey(2)), e(1, 0), e(5, 0)]
        );
    }

    #[test]
    fn update_repositions_instead_of_duplicating() {
        let mut q = OpenQueue::new();
        assert!(q.push_or_update(e(1, 0), 9.0, 1.0));
        assert!(q.push_or_update(e(2, 0), 5.0, 1.0));
        assert!(!q.push_or_update(e(1, 0), 3.0, 1.0));
        assert_eq!(q.len(), 2);
        assert_eq!(q.peek().unwrap().edge, e(1, 0));
        assert!(!q.push_or_update(e(1, 0), 30.0, 1.0));
        assert_eq!(q.peek().unwrap().edge, e(2, 0));
        q.check_invariants().unwrap();
    }

    #[test]
    fn empty_queue_min_is_infinite() {
        let q = OpenQueue::new();
        assert_eq!(q.min_f(), f64::INFINITY);
        assert!(q.peek().is_none());
    }

    #[derive(Debug, Clone)]
    enum Op {
        Upsert(u32, u32, u16),
        Remove(u32, u32),
        Pop,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            4 => (0u32..12, 0u32..3, 0u16..50).prop_map(|(s, a, f)| Op::Upsert(s, a, f)),
            1 => (0u32..12, 0u32..3).prop_map(|(s, a)| Op::Remove(s, a)),
            2 => Just(Op::Pop),
        ]
    }

    proptest! {
        #[test]
        fn matches_a_sorted_model_under_random_ops(ops in proptest::collection::vec(op(), 0..200)) {
            let mut q = OpenQueue::new();
            let mut model: HashMap<Edge, f64> = HashMap::new();
            for op in ops {
                match op {
                    Op::Upsert(s, a, f) => {
                        q.push_or_update(e(s, a), f as f64, 0.0);
                        model.insert(e(s, a), f as f64);
                    }
                    Op::Remove(s, a) => {
                        let got = q.remove(&e(s, a)).map(|x| x.f);
                        prop_assert_eq!(got, model.remove(&e(s, a)));
                    }
                    Op::Pop => {
                        let expect = model
                            .iter()
                            .min_by(|x, y| x.1.total_cmp(y.1).then_with(|| x.0.cmp(y.0)))
                            .map(|(k, v)| (*k, *v));
                        let got = q.pop().map(|x| (x.edge, x.f));
                        prop_assert_eq!(got, expect);
                        if let Some((k, _)) = expect {
                            model.remove(&k);
                        }
                    }
                }
                prop_assert!(q.check_invariants().is_ok());
                prop_assert_eq!(q.len(), model.len());
                let min = model.values().cloned().fold(f64::INFINITY, f64::min);
                prop_assert_eq!(q.min_f(), min);
            }
        }
    }
}
