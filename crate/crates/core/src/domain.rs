//! The planning-domain contract consumed by every search engine, plus the
//! per-episode state registry and edge-evaluation cache.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

/// Dense handle for a state discovered during one planning episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey(pub u32);

impl StateKey {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Index into a domain's action set. `ActionId::DUMMY` is reserved for the
/// placeholder edge that stands for all outgoing edges of an unexpanded state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl ActionId {
    pub const DUMMY: ActionId = ActionId(u32::MAX);

    #[inline]
    pub fn is_dummy(self) -> bool {
        self == Self::DUMMY
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dummy() {
            f.write_str("a^d")
        } else {
            write!(f, "a{}", self.0)
        }
    }
}

/// A (state, action) pair: the unit of search work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub state: StateKey,
    pub action: ActionId,
}

impl Edge {
    pub fn new(state: StateKey, action: ActionId) -> Self {
        Edge { state, action }
    }

    pub fn dummy(state: StateKey) -> Self {
        Edge {
            state,
            action: ActionId::DUMMY,
        }
    }

    #[inline]
    pub fn is_dummy(&self) -> bool {
        self.action.is_dummy()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.action)
    }
}

/// Result of evaluating one edge. Invalid edges carry neither successor nor cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome<S> {
    Invalid,
    Valid { successor: S, cost: f64 },
}

impl<S> Outcome<S> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Outcome::Valid { .. })
    }

    pub fn cost(&self) -> Option<f64> {
        match self {
            Outcome::Valid { cost, .. } => Some(*cost),
            Outcome::Invalid => None,
        }
    }

    pub fn successor(&self) -> Option<&S> {
        match self {
            Outcome::Valid { successor, .. } => Some(successor),
            Outcome::Invalid => None,
        }
    }

    pub fn map<T>(self, f: impl FnOnce(S) -> T) -> Outcome<T> {
        match self {
            Outcome::Invalid => Outcome::Invalid,
            Outcome::Valid { successor, cost } => Outcome::Valid {
                successor: f(successor),
                cost,
            },
        }
    }
}

/// Outcome expressed in episode-local keys.
pub type SuccessorOutcome = Outcome<StateKey>;

/// A deterministic planning domain with possibly expensive edge evaluation.
///
/// Implementations must tolerate concurrent `evaluate` calls on distinct
/// edges. `heuristic` must be consistent and zero on goal states;
/// `pairwise_heuristic` must never overestimate the optimal cost between its
/// arguments and must be zero on identical states.
pub trait Domain: Sync {
    type State: Clone + Eq + Hash + Send + Sync + fmt::Debug;

    /// Actions applicable at `state`, in a fixed order. Never contains
    /// [`ActionId::DUMMY`].
    fn actions(&self, state: &Self::State) -> Vec<ActionId>;

    /// Generate the successor of `state` under `action`. May be slow.
    fn evaluate(&self, state: &Self::State, action: ActionId) -> Outcome<Self::State>;

    fn heuristic(&self, state: &Self::State) -> f64;

    fn pairwise_heuristic(&self, from: &Self::State, to: &Self::State) -> f64;

    fn is_goal(&self, state: &Self::State) -> bool;
}

impl<D: Domain + ?Sized> Domain for &D {
    type State = D::State;

    fn actions(&self, state: &Self::State) -> Vec<ActionId> {
        (**self).actions(state)
    }

    fn evaluate(&self, state: &Self::State, action: ActionId) -> Outcome<Self::State> {
        (**self).evaluate(state, action)
    }

    fn heuristic(&self, state: &Self::State) -> f64 {
        (**self).heuristic(state)
    }

    fn pairwise_heuristic(&self, from: &Self::State, to: &Self::State) -> f64 {
        (**self).pairwise_heuristic(from, to)
    }

    fn is_goal(&self, state: &Self::State) -> bool {
        (**self).is_goal(state)
    }
}

struct RegistryInner<S> {
    index: HashMap<S, StateKey>,
    states: Vec<S>,
}

/// Maps domain states to dense keys. Keys are handed out in discovery order
/// and never reused within an episode.
pub struct StateRegistry<S> {
    inner: RwLock<RegistryInner<S>>,
}

impl<S: Clone + Eq + Hash> Default for StateRegistry<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Clone + Eq + Hash> StateRegistry<S> {
    pub fn new() -> Self {
        StateRegistry {
            inner: RwLock::new(RegistryInner {
                index: HashMap::new(),
                states: Vec::new(),
            }),
        }
    }

    pub fn intern(&self, state: &S) -> StateKey {
        if let Some(&key) = self.inner.read().unwrap().index.get(state) {
            return key;
        }
        let mut inner = self.inner.write().unwrap();
        if let Some(&key) = inner.index.get(state) {
            return key;
        }
        let key =
            StateKey(u32::try_from(inner.states.len()).expect("state space exceeds u32 keys"));
        inner.states.push(state.clone());
        inner.index.insert(state.clone(), key);
        key
    }

    pub fn lookup(&self, state: &S) -> Option<StateKey> {
        self.inner.read().unwrap().index.get(state).copied()
    }

    /// # Panics
    /// If `key` was not issued by this registry.
    pub fn get(&self, key: StateKey) -> S {
        self.inner.read().unwrap().states[key.index()].clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Copies of all states with keys `>= from`, in key order.
    pub fn states_from(&self, from: usize) -> Vec<S> {
        let inner = self.inner.read().unwrap();
        inner
            .states
            .get(from..)
            .map(|s| s.to_vec())
            .unwrap_or_default()
    }
}

/// Per-episode memo of edge evaluations.
///
/// The domain is invoked at most once per distinct edge; a concurrent second
/// caller for the same edge blocks until the first evaluation is stored.
pub struct EdgeCache {
    slots: Mutex<HashMap<Edge, Arc<OnceLock<SuccessorOutcome>>>>,
    invocations: AtomicUsize,
}

impl Default for EdgeCache {
    fn default() -> Self {
        Self::new()
    }
}

impl EdgeCache {
    pub fn new() -> Self {
        EdgeCache {
            slots: Mutex::new(HashMap::new()),
            invocations: AtomicUsize::new(0),
        }
    }

    /// Evaluate `edge`, consulting the cache first. Successor states are
    /// interned into `registry`.
    ///
    /// # Panics
    /// If `edge` is a dummy edge.
    pub fn evaluate<D: Domain>(
        &self,
        domain: &D,
        registry: &StateRegistry<D::State>,
        edge: Edge,
    ) -> SuccessorOutcome {
        assert!(!edge.is_dummy(), "dummy edges are never evaluated");
        let slot = {
            let mut slots = self.slots.lock().unwrap();
            Arc::clone(slots.entry(edge).or_default())
        };
        *slot.get_or_init(|| {
            self.invocations.fetch_add(1, Ordering::Relaxed);
            let state = registry.get(edge.state);
            domain
                .evaluate(&state, edge.action)
                .map(|succ| registry.intern(&succ))
        })
    }

    pub fn cached(&self, edge: Edge) -> Option<SuccessorOutcome> {
        let slots = self.slots.lock().unwrap();
        slots.get(&edge).and_then(|slot| slot.get().copied())
    }

    /// Number of times the domain's `evaluate` has been invoked.
    pub fn invocations(&self) -> usize {
        self.invocations.load(Ordering::Relaxed)
    }

    /// All evaluated edges with their outcomes, sorted by edge.
    pub fn entries(&self) -> Vec<(Edge, SuccessorOutcome)> {
        let slots = self.slots.lock().unwrap();
        let mut out: Vec<_> = slots
            .iter()
            .filter_map(|(e, slot)| slot.get().map(|o| (*e, *o)))
            .collect();
        out.sort_by_key(|(e, _)| *e);
        out
    }

    pub fn clear(&self) {
        self.slots.lock().unwrap().clear();
        self.invocations.store(0, Ordering::Relaxed);
    }
}

/// Shorthand used by the engines: evaluate through the cache and translate
/// into a self-contained record.
pub fn evaluate_edge_cached<D: Domain>(
    cache: &EdgeCache,
    domain: &D,
    registry: &StateRegistry<D::State>,
    edge: Edge,
) -> SuccessorOutcome {
    cache.evaluate(domain, registry, edge)
}
