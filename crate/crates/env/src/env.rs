use crate::error::EnvError;
use crate::goal::GoalSpec;
use crate::physics::{self, StepOutcome};
use crate::robot::{ActionDelta, RobotSpec};
use crate::state::SceneState;
use crate::suite;
use crate::variant::VariantSpec;

/// A live environment: a variant plus its current state.
#[derive(Clone, Debug)]
pub struct Env {
    variant: VariantSpec,
    spec: RobotSpec,
    seed: u64,
    state: SceneState,
}

impl Env {
    /// Builds the env and resets it with `seed`.
    pub fn new(variant: VariantSpec, seed: u64) -> Result<Self, EnvError> {
        let state = suite::generate(&variant, seed)?;
        Ok(Self { variant, spec: RobotSpec::default(), seed, state })
    }

    /// Wraps an existing state, e.g. a belief built from a noisy observation.
    pub fn from_state(variant: VariantSpec, seed: u64, state: SceneState) -> Self {
        Self { variant, spec: RobotSpec::default(), seed, state }
    }

    pub fn reset(&mut self, seed: u64) -> Result<&SceneState, EnvError> {
        self.state = suite::generate(&self.variant, seed)?;
        self.seed = seed;
        Ok(&self.state)
    }

    pub fn step(&mut self, a: ActionDelta) -> StepOutcome {
        let out = physics::step(self.variant.env, &self.spec, &self.state, a);
        self.state = out.state.clone();
        out
    }

    pub fn state(&self) -> &SceneState {
        &self.state
    }

    pub fn set_state(&mut self, s: SceneState) {
        self.state = s;
    }

    pub fn goal(&self) -> &'static GoalSpec {
        suite::goal(self.variant.env)
    }

    pub fn is_solved(&self) -> bool {
        self.goal().holds(&self.state)
    }

    pub fn variant(&self) -> &VariantSpec {
        &self.variant
    }

    pub fn spec(&self) -> &RobotSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Fresh initial state for `variant` and `seed`.
pub fn reset(variant: &VariantSpec, seed: u64) -> Result<SceneState, EnvError> {
    suite::generate(variant, seed)
}
