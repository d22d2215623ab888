//! Predictive-sampling MPC over smooth control-point action sequences.

use kinder_env::{step, ActionDelta, EnvId, RobotSpec, SceneState};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Control points: one 5-component action per knot.
pub type ControlPoints = Vec<[f64; 5]>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpcConfig {
    pub num_candidates: usize,
    pub horizon: usize,
    pub num_control_points: usize,
    /// Noise standard deviation as a fraction of the action range.
    pub noise_sigma: f64,
    pub replan_every: usize,
    pub iters_per_step: usize,
    /// Shrink sigma by 0.8 whenever the incumbent improves.
    pub anneal: bool,
}

impl Default for MpcConfig {
    fn default() -> Self {
        Self {
            num_candidates: 10,
            horizon: 100,
            num_control_points: 10,
            noise_sigma: 0.3,
            replan_every: 1,
            iters_per_step: 1,
            anneal: false,
        }
    }
}

/// Width of every action component's range `[-1, 1]`.
pub const ACTION_RANGE: f64 = 2.0;

pub fn zero_control_points(cfg: &MpcConfig) -> ControlPoints {
    vec![[0.0; 5]; cfg.num_control_points]
}

/// Value of the piecewise-linear control curve at step `t` (clamped to the last knot).
fn curve_at(cp: &[[f64; 5]], horizon: usize, t: f64) -> [f64; 5] {
    let n = cp.len();
    if n == 1 || horizon == 1 {
        return cp[0];
    }
    let x = (t * (n - 1) as f64 / (horizon - 1) as f64).clamp(0.0, (n - 1) as f64);
    let i = (x.floor() as usize).min(n - 2);
    let f = x - i as f64;
    let mut u = [0.0; 5];
    for (k, v) in u.iter_mut().enumerate() {
        *v = cp[i][k] * (1.0 - f) + cp[i + 1][k] * f;
    }
    u
}

/// Piecewise-linear interpolation of evenly spaced control points over `horizon` steps.
pub fn interpolate(cp: &[[f64; 5]], horizon: usize) -> Vec<ActionDelta> {
    (0..horizon).map(|t| ActionDelta::new(curve_at(cp, horizon, t as f64))).collect()
}

/// Control points of the same curve advanced by one step; the end is held.
pub fn shift_one_step(cp: &[[f64; 5]], horizon: usize) -> ControlPoints {
    let n = cp.len();
    if n == 1 || horizon == 1 {
        return cp.to_vec();
    }
    (0..n).map(|k| curve_at(cp, horizon, k as f64 * (horizon - 1) as f64 / (n - 1) as f64 + 1.0)).collect()
}

/// Steps to reach the goal within the horizon, if it is reached.
pub fn rollout(env: EnvId, spec: &RobotSpec, state: &SceneState, actions: &[ActionDelta]) -> Option<usize> {
    let mut s = state.clone();
    for (t, a) in actions.iter().enumerate() {
        let out = step(env, spec, &s, *a);
        if out.terminated {
            return Some(t + 1);
        }
        s = out.state;
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpcStep {
    pub action: ActionDelta,
    pub warm: ControlPoints,
    /// Index of the chosen candidate; 0 is the unperturbed warm start.
    pub best: usize,
    /// Steps to success of the chosen candidate, if it succeeds.
    pub best_steps: Option<usize>,
    pub sigma: f64,
}

/// Sparse return of a rollout: earlier success is better; all failures tie.
fn better(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// One MPC decision: sample candidates around `warm`, keep the best by
/// sparse return, and return its first action with the shifted control points.
pub fn mpc_act<R: Rng>(
    env: EnvId,
    spec: &RobotSpec,
    state: &SceneState,
    cfg: &MpcConfig,
    warm: &[[f64; 5]],
    sigma: f64,
    rng: &mut R,
) -> MpcStep {
    assert!(cfg.num_control_points >= 1 && cfg.num_control_points <= cfg.horizon && sigma > 0.0);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut incumbent: ControlPoints = warm.to_vec();
    let mut inc_steps = rollout(env, spec, state, &interpolate(&incumbent, cfg.horizon));
    let mut best = 0;
    let mut sigma_now = sigma;
    for _ in 0..cfg.iters_per_step.max(1) {
        let base = incumbent.clone();
        let mut improved = false;
        for c in 1..cfg.num_candidates {
            let cand: ControlPoints = base
                .iter()
                .map(|p| {
                    let mut q = *p;
                    for v in q.iter_mut() {
                        *v = (*v + unit.sample(rng) * sigma_now * ACTION_RANGE).clamp(-1.0, 1.0);
                    }
                    q
                })
                .collect();
            let steps = rollout(env, spec, state, &interpolate(&cand, cfg.horizon));
            if better(steps, inc_steps) {
                incumbent = cand;
                inc_steps = steps;
                best = c;
                improved = true;
            }
        }
        if cfg.anneal && improved {
            sigma_now *= 0.8;
        }
    }
    let action = interpolate(&incumbent, cfg.horizon)[0];
    MpcStep { action, warm: shift_one_step(&incumbent, cfg.horizon), best, best_steps: inc_steps, sigma: sigma_now }
}
