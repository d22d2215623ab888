use std::fmt;
use std::sync::Arc;

use crate::state::SceneState;

type Pred = dyn Fn(&SceneState) -> bool + Send + Sync;

/// A pure goal predicate plus a human-readable description.
#[derive(Clone)]
pub struct GoalSpec {
    pub description: String,
    pred: Arc<Pred>,
}

impl GoalSpec {
    pub fn new(description: impl Into<String>, pred: impl Fn(&SceneState) -> bool + Send + Sync + 'static) -> Self {
        Self { description: description.into(), pred: Arc::new(pred) }
    }

    pub fn holds(&self, s: &SceneState) -> bool {
        (self.pred)(s)
    }
}

impl fmt::Debug for GoalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GoalSpec").field("description", &self.description).finish()
    }
}

pub fn check_goal(state: &SceneState, g: &GoalSpec) -> bool {
    g.holds(state)
}
