use crate::domain::ActionId;

/// One step of a path: the action taken and the state it leads to.
#[derive(Clone, Debug, PartialEq)]
pub struct PathStep<S> {
    pub action: ActionId,
    pub state: S,
    pub cost: f64,
}

/// Ordered edge sequence from the start state.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<S> {
    pub start: S,
    pub steps: Vec<PathStep<S>>,
}

impl<S> Path<S> {
    pub fn empty(start: S) -> Self {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    /// Sum of step costs, accumulated start to goal.
    pub fn cost(&self) -> f64 {
        self.steps.iter().map(|s| s.cost).sum()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &S {
        self.steps.last().map_or(&self.start, |s| &s.state)
    }

    /// Start followed by every visited state.
    pub fn states(&self) -> impl Iterator<Item = &S> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.state))
    }
}
