use crate::domain::{Edge, StateKey};

const ABSENT: u32 = u32::MAX;

/// Per-state search record.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchNode {
    pub g: f64,
    pub h: f64,
    pub parent: Option<Edge>,
    /// Cost of `parent`, kept so backtracking does not need the edge cache.
    pub parent_cost: f64,
    pub in_be: bool,
    pub in_closed: bool,
    pub in_incon: bool,
    pub n_successors_generated: u32,
    /// Size of the action set, known once the dummy edge has been expanded.
    pub n_actions: u32,
    pub is_goal: bool,
    be_slot: u32,
}

impl SearchNode {
    pub fn new(h: f64, is_goal: bool) -> Self {
        SearchNode {
            g: f64::INFINITY,
            h,
            parent: None,
            parent_cost: 0.0,
            in_be: false,
            in_closed: false,
            in_incon: false,
            n_successors_generated: 0,
            n_actions: 0,
            is_goal,
            be_slot: ABSENT,
        }
    }
}

/// All per-state records of an episode together with the BE, CLOSED and
/// INCON memberships. States themselves are stored alongside so pairwise
/// heuristics can be computed without touching the registry.
#[derive(Clone, Debug)]
pub struct SearchSpace<S> {
    nodes: Vec<SearchNode>,
    states: Vec<S>,
    be: Vec<StateKey>,
    closed: Vec<StateKey>,
    incon: Vec<StateKey>,
}

impl<S> Default for SearchSpace<S> {
    fn default() -> Self {
        SearchSpace {
            nodes: Vec::new(),
            states: Vec::new(),
            be: Vec::new(),
            closed: Vec::new(),
            incon: Vec::new(),
        }
    }
}

impl<S> SearchSpace<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, key: StateKey) -> bool {
        key.index() < self.nodes.len()
    }

    /// Register the record for `key`. Keys must arrive densely in order.
    ///
    /// # Panics
    /// If `key` is not the next unused key.
    pub fn add(&mut self, key: StateKey, state: S, h: f64, is_goal: bool) {
        assert_eq!(key.index(), self.nodes.len(), "state keys must be dense");
        self.nodes.push(SearchNode::new(h, is_goal));
        self.states.push(state);
    }

    #[inline]
    pub fn node(&self, key: StateKey) -> &SearchNode {
        &self.nodes[key.index()]
    }

    #[inline]
    pub fn node_mut(&mut self, key: StateKey) -> &mut SearchNode {
        &mut self.nodes[key.index()]
    }

    #[inline]
    pub fn state(&self, key: StateKey) -> &S {
        &self.states[key.index()]
    }

    #[inline]
    pub fn g(&self, key: StateKey) -> f64 {
        self.nodes[key.index()].g
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn be(&self) -> &[StateKey] {
        &self.be
    }

    pub fn closed(&self) -> &[StateKey] {
        &self.closed
    }

    pub fn incon(&self) -> &[StateKey] {
        &self.incon
    }

    pub fn be_insert(&mut self, key: StateKey) {
        let slot = self.be.len() as u32;
        let node = &mut self.nodes[key.index()];
        if node.in_be {
            return;
        }
        node.in_be = true;
        node.be_slot = slot;
        self.be.push(key);
    }

    pub fn be_remove(&mut self, key: StateKey) {
        let node = &mut self.nodes[key.index()];
        if !node.in_be {
            return;
        }
        let slot = node.be_slot as usize;
        node.in_be = false;
        node.be_slot = ABSENT;
        self.be.swap_remove(slot);
        if let Some(&moved) = self.be.get(slot) {
            self.nodes[moved.index()].be_slot = slot as u32;
        }
    }

    /// Move `key` from BE to CLOSED.
    pub fn close(&mut self, key: StateKey) {
        self.be_remove(key);
        let node = &mut self.nodes[key.index()];
        if !node.in_closed {
            node.in_closed = true;
            self.closed.push(key);
        }
    }

    pub fn clear_closed(&mut self) {
        for k in self.closed.drain(..) {
            self.nodes[k.index()].in_closed = false;
        }
    }

    /// Remove every state from BE, returning them in insertion-independent
    /// (key) order.
    pub fn drain_be(&mut self) -> Vec<StateKey> {
        let mut out = std::mem::take(&mut self.be);
        for k in &out {
            let n = &mut self.nodes[k.index()];
            n.in_be = false;
            n.be_slot = ABSENT;
        }
        out.sort();
        out
    }

    pub fn incon_insert(&mut self, key: StateKey) {
        let node = &mut self.nodes[key.index()];
        if !node.in_incon {
            node.in_incon = true;
            self.incon.push(key);
        }
    }

    pub fn take_incon(&mut self) -> Vec<StateKey> {
        let out = std::mem::take(&mut self.incon);
        for k in &out {
            self.nodes[k.index()].in_incon = false;
        }
        out
    }

    /// Consistency of the membership flags with the member lists, BE/CLOSED
    /// exclusivity, and the successor counter bound. Used by debug
    /// assertions and tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.in_be && n.in_closed {
                return Err(format!("s{i} is in both BE and CLOSED"));
            }
            if (n.in_be || n.in_closed) && n.n_successors_generated > n.n_actions {
                return Err(format!(
                    "s{i} generated {} of {} successors",
                    n.n_successors_generated, n.n_actions
                ));
            }
            if n.in_be && n.n_successors_generated == n.n_actions {
                return Err(format!("s{i} finished all edges but is still in BE"));
            }
        }
        for (slot, k) in self.be.iter().enumerate() {
            let n = &self.nodes[k.index()];
            if !n.in_be || n.be_slot as usize != slot {
                return Err(format!("BE list entry {k} is stale"));
            }
        }
        let flagged = |f: fn(&SearchNode) -> bool| self.nodes.iter().filter(|n| f(n)).count();
        if flagged(|n| n.in_be) != self.be.len()
            || flagged(|n| n.in_closed) != self.closed.len()
            || flagged(|n| n.in_incon) != self.incon.len()
        {
            return Err("membership flags disagree with member lists".into());
        }
        Ok(())
    }
}
