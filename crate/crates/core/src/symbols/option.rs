//! Option execution: scripted phases that follow motion plans, toggle the
//! vacuum, and push until a condition holds.

use std::collections::VecDeque;

use kinder_env::{ActionDelta, Env, RobotConfig, RobotSpec, SceneState};
use thiserror::Error;

use super::motion::{step_action, MotionPlan};
use super::skills::SkillDef;

/// Default per-option step cap.
pub const OPTION_STEP_CAP: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkillError {
    #[error("{skill}: not initiable in this state")]
    InitiationFailed { skill: String },
    #[error("{skill}: expected {expected} objects and {params} params, got {got_objects} and {got_params}")]
    BadArguments { skill: String, expected: usize, params: usize, got_objects: usize, got_params: usize },
    #[error("{skill}: unknown object `{object}`")]
    UnknownObject { skill: String, object: String },
}

/// Lazily computed motion, evaluated when its phase starts.
pub type PlanFn = Box<dyn Fn(&SceneState, u64) -> Option<MotionPlan> + Send>;
pub type Condition = Box<dyn Fn(&SceneState) -> bool + Send>;

pub enum Phase {
    Follow { waypoints: Vec<RobotConfig>, next: usize },
    Plan(PlanFn),
    Vacuum(bool),
    Push { u: [f64; 4], until: Condition, max_steps: usize, done: usize },
}

impl Phase {
    pub fn follow(plan: MotionPlan) -> Self {
        Phase::Follow { waypoints: plan.waypoints, next: 1 }
    }

    pub fn push(u: [f64; 4], until: impl Fn(&SceneState) -> bool + Send + 'static, max_steps: usize) -> Self {
        Phase::Push { u, until: Box::new(until), max_steps, done: 0 }
    }
}

/// An option policy's memory: the remaining phases.
pub struct Script {
    phases: VecDeque<Phase>,
    seed: u64,
    spec: RobotSpec,
}

impl Script {
    pub fn new(phases: Vec<Phase>, seed: u64) -> Self {
        Self { phases: phases.into(), seed, spec: RobotSpec::default() }
    }

    pub fn extend(&mut self, phases: Vec<Phase>) {
        self.phases.extend(phases);
    }

    /// The next action, or `None` when the script is exhausted or stuck.
    pub fn act(&mut self, s: &SceneState) -> Option<ActionDelta> {
        let hold = if s.held.is_empty() { -1.0 } else { 1.0 };
        let cur = RobotConfig::from_state(s);
        loop {
            let phase = self.phases.front_mut()?;
            match phase {
                Phase::Follow { waypoints, next } => {
                    if *next >= waypoints.len() {
                        self.phases.pop_front();
                        continue;
                    }
                    let a = step_action(&cur, &waypoints[*next], &self.spec, hold);
                    *next += 1;
                    return Some(a);
                }
                Phase::Plan(f) => {
                    self.seed = self.seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
                    let plan = f(s, self.seed)?;
                    self.phases[0] = Phase::follow(plan);
                }
                Phase::Vacuum(on) => {
                    let on = *on;
                    if on && cur.vacuum_on {
                        return Some(ActionDelta::new([0.0, 0.0, 0.0, 0.0, -1.0]));
                    }
                    self.phases.pop_front();
                    if on || cur.vacuum_on {
                        return Some(ActionDelta::new([0.0, 0.0, 0.0, 0.0, if on { 1.0 } else { -1.0 }]));
                    }
                }
                Phase::Push { u, until, max_steps, done } => {
                    if until(s) {
                        self.phases.pop_front();
                        continue;
                    }
                    if *done >= *max_steps {
                        return None;
                    }
                    *done += 1;
                    return Some(ActionDelta::new([u[0], u[1], u[2], u[3], hold]));
                }
            }
        }
    }
}

/// States visited (including the start) and the actions taken.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub states: Vec<SceneState>,
    pub actions: Vec<ActionDelta>,
    pub success: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ExecConfig {
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for ExecConfig {
    fn default() -> Self {
        Self { max_steps: OPTION_STEP_CAP, seed: 0 }
    }
}

/// Runs one option on `env` until its terminal condition holds or the cap is hit.
pub fn execute_option(
    env: &mut Env,
    skill: &SkillDef,
    objects: &[&str],
    params: &[f64],
    cfg: &ExecConfig,
) -> Result<Trajectory, SkillError> {
    skill.check_args(env.state(), objects, params)?;
    let mut script = skill
        .initiate(env.state(), objects, params, cfg.seed)
        .ok_or_else(|| SkillError::InitiationFailed { skill: skill.name.to_string() })?;
    let mut traj = Trajectory { states: vec![env.state().clone()], ..Default::default() };
    loop {
        if skill.terminal(env.state(), objects) {
            traj.success = true;
            return Ok(traj);
        }
        if traj.actions.len() >= cfg.max_steps {
            return Ok(traj);
        }
        let Some(a) = script.act(env.state()) else { return Ok(traj) };
        let out = env.step(a);
        traj.actions.push(a);
        traj.states.push(out.state);
    }
}
