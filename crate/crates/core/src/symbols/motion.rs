//! Bidirectional RRT over (x, y, θ, ext) with step-resolution edges.

use kinder_env::{carried_poses, robot_collides, RobotConfig, RobotDims, RobotSpec, SceneState, WORLD};
use kinder_geom::{collides, wrap_angle, PlacedShape, Pose2, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default expansion budget.
pub const MOTION_BUDGET: usize = 5_000;
const GOAL_BIAS: f64 = 0.2;
/// Longest tree edge, in env steps.
const EXTEND_STEPS: f64 = 12.0;
const GOAL_SAMPLE_TRIES: usize = 50;

/// Robot configurations, one env step apart.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionPlan {
    pub waypoints: Vec<RobotConfig>,
}

impl MotionPlan {
    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn last(&self) -> &RobotConfig {
        self.waypoints.last().expect("plans are never empty")
    }
}

/// Where a motion should end.
pub enum ConfigGoal {
    Exact(RobotConfig),
    Region { contains: Box<dyn Fn(&RobotConfig) -> bool>, sample: Box<dyn Fn(&mut ChaCha8Rng) -> RobotConfig> },
}

impl ConfigGoal {
    fn contains(&self, c: &RobotConfig, spec: &RobotSpec) -> bool {
        match self {
            ConfigGoal::Exact(g) => steps_between(c, g, spec) < 1e-9,
            ConfigGoal::Region { contains, .. } => contains(c),
        }
    }
}

/// Collision test for the robot and its load, with optional extra obstacles.
pub struct Checker<'a> {
    state: &'a SceneState,
    dims: RobotDims,
    extra: Vec<PlacedShape>,
}

impl<'a> Checker<'a> {
    pub fn new(state: &'a SceneState) -> Self {
        Self { state, dims: RobotDims::from_state(state), extra: Vec::new() }
    }

    /// Obstacles that also block held objects, e.g. a button a carried hook must not nudge.
    pub fn with_extra(mut self, extra: Vec<PlacedShape>) -> Self {
        self.extra = extra;
        self
    }

    pub fn collides(&self, c: &RobotConfig) -> bool {
        let (w, h) = WORLD;
        if c.pose.x < 0.0 || c.pose.x > w || c.pose.y < 0.0 || c.pose.y > h {
            return true;
        }
        if robot_collides(self.state, c) {
            return true;
        }
        if self.extra.is_empty() {
            return false;
        }
        let mut bodies = vec![self.dims.base(c), self.dims.arm(c), self.dims.vacuum(c)];
        for (n, p) in carried_poses(self.state, c) {
            bodies.push(PlacedShape::new(self.state.obj(&n).shape(), p));
        }
        bodies.iter().any(|b| self.extra.iter().any(|e| collides(b, e, DEFAULT_TOL)))
    }
}

fn deltas(a: &RobotConfig, b: &RobotConfig) -> [f64; 4] {
    [b.pose.x - a.pose.x, b.pose.y - a.pose.y, wrap_angle(b.pose.theta - a.pose.theta), b.ext - a.ext]
}

/// Number of env steps needed to move between two configurations.
pub fn steps_between(a: &RobotConfig, b: &RobotConfig, spec: &RobotSpec) -> f64 {
    let d = deltas(a, b);
    (0..4).map(|i| d[i].abs() / spec.max_deltas[i]).fold(0.0, f64::max)
}

fn lerp(a: &RobotConfig, b: &RobotConfig, t: f64) -> RobotConfig {
    let d = deltas(a, b);
    RobotConfig {
        pose: Pose2::new(a.pose.x + t * d[0], a.pose.y + t * d[1], a.pose.theta + t * d[2]),
        ext: a.ext + t * d[3],
        vacuum_on: a.vacuum_on,
    }
}

/// Splits `a → b` into equal env-step increments (excluding `a`).
fn discretize(a: &RobotConfig, b: &RobotConfig, spec: &RobotSpec) -> Vec<RobotConfig> {
    let n = (steps_between(a, b, spec) - 1e-9).ceil().max(1.0) as usize;
    (1..=n).map(|k| if k == n { *b } else { lerp(a, b, k as f64 / n as f64) }).collect()
}

fn edge_free(chk: &Checker, a: &RobotConfig, b: &RobotConfig, spec: &RobotSpec) -> bool {
    discretize(a, b, spec).iter().all(|c| !chk.collides(c))
}

struct Tree {
    nodes: Vec<RobotConfig>,
    parent: Vec<usize>,
}

impl Tree {
    fn new(root: RobotConfig) -> Self {
        Self { nodes: vec![root], parent: vec![usize::MAX] }
    }

    fn nearest(&self, q: &RobotConfig, spec: &RobotSpec) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = steps_between(n, q, spec);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    fn path_to_root(&self, mut i: usize) -> Vec<RobotConfig> {
        let mut out = vec![self.nodes[i]];
        while self.parent[i] != usize::MAX {
            i = self.parent[i];
            out.push(self.nodes[i]);
        }
        out
    }
}

enum Extend {
    Trapped,
    Advanced(usize),
    Reached(usize),
}

fn extend(t: &mut Tree, q: &RobotConfig, chk: &Checker, spec: &RobotSpec) -> Extend {
    let n = t.nearest(q, spec);
    let from = t.nodes[n];
    let d = steps_between(&from, q, spec);
    let (new, reached) = if d <= EXTEND_STEPS { (*q, true) } else { (lerp(&from, q, EXTEND_STEPS / d), false) };
    if !edge_free(chk, &from, &new, spec) {
        return Extend::Trapped;
    }
    t.nodes.push(new);
    t.parent.push(n);
    let id = t.nodes.len() - 1;
    if reached {
        Extend::Reached(id)
    } else {
        Extend::Advanced(id)
    }
}

fn connect(t: &mut Tree, q: &RobotConfig, chk: &Checker, spec: &RobotSpec) -> Extend {
    loop {
        match extend(t, q, chk, spec) {
            Extend::Advanced(_) => continue,
            other => return other,
        }
    }
}

fn random_config(rng: &mut ChaCha8Rng, spec: &RobotSpec, vacuum_on: bool) -> RobotConfig {
    let (w, h) = WORLD;
    RobotConfig {
        pose: Pose2::new(
            rng.random_range(0.0..w),
            rng.random_range(0.0..h),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        ),
        ext: rng.random_range(spec.arm_min..=spec.arm_max),
        vacuum_on,
    }
}

/// Greedy shortcutting: from each kept node jump to the farthest directly reachable one.
fn shortcut(path: Vec<RobotConfig>, chk: &Checker, spec: &RobotSpec) -> Vec<RobotConfig> {
    let mut out = vec![path[0]];
    let mut i = 0;
    while i + 1 < path.len() {
        let mut j = path.len() - 1;
        while j > i + 1 && !edge_free(chk, &path[i], &path[j], spec) {
            j -= 1;
        }
        out.push(path[j]);
        i = j;
    }
    out
}

/// Plans from the robot's current configuration to `goal`. Returns `None` when the start is
/// in collision, no collision-free goal configuration is found, or the budget runs out.
pub fn plan_motion(state: &SceneState, goal: &ConfigGoal, seed: u64) -> Option<MotionPlan> {
    plan_motion_with(&Checker::new(state), goal, seed, MOTION_BUDGET)
}

pub fn plan_motion_with(chk: &Checker, goal: &ConfigGoal, seed: u64, budget: usize) -> Option<MotionPlan> {
    let spec = RobotSpec::default();
    let start = RobotConfig::from_state(chk.state);
    if goal.contains(&start, &spec) {
        return Some(MotionPlan { waypoints: vec![start] });
    }
    if chk.collides(&start) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let goal_cfg = match goal {
        ConfigGoal::Exact(g) => {
            let g = RobotConfig { vacuum_on: start.vacuum_on, ..*g };
            (!chk.collides(&g)).then_some(g)?
        }
        ConfigGoal::Region { sample, contains } => (0..GOAL_SAMPLE_TRIES)
            .map(|_| RobotConfig { vacuum_on: start.vacuum_on, ..sample(&mut rng) })
            .find(|g| contains(g) && !chk.collides(g))?,
    };
    if edge_free(chk, &start, &goal_cfg, &spec) {
        return Some(finish(vec![start, goal_cfg], &spec));
    }
    let mut a = Tree::new(start);
    let mut b = Tree::new(goal_cfg);
    let mut a_is_start = true;
    for _ in 0..budget {
        let q = if rng.random_bool(GOAL_BIAS) { b.nodes[0] } else { random_config(&mut rng, &spec, start.vacuum_on) };
        let new = match extend(&mut a, &q, chk, &spec) {
            Extend::Trapped => None,
            Extend::Advanced(i) | Extend::Reached(i) => Some(i),
        };
        if let Some(i) = new {
            let target = a.nodes[i];
            if let Extend::Reached(j) = connect(&mut b, &target, chk, &spec) {
                let (s_tree, s_end, g_tree, g_end) = if a_is_start { (&a, i, &b, j) } else { (&b, j, &a, i) };
                let mut path = s_tree.path_to_root(s_end);
                path.reverse();
                path.extend(g_tree.path_to_root(g_end).into_iter().skip(1));
                let path = shortcut(path, chk, &spec);
                return Some(finish(path, &spec));
            }
        }
        std::mem::swap(&mut a, &mut b);
        a_is_start = !a_is_start;
    }
    None
}

fn finish(path: Vec<RobotConfig>, spec: &RobotSpec) -> MotionPlan {
    let mut waypoints = vec![path[0]];
    for w in path.windows(2) {
        waypoints.extend(discretize(&w[0], &w[1], spec));
    }
    MotionPlan { waypoints }
}

/// Action moving the robot from `cur` to the adjacent waypoint `next`.
pub fn step_action(cur: &RobotConfig, next: &RobotConfig, spec: &RobotSpec, vacuum: f64) -> kinder_env::ActionDelta {
    let d = deltas(cur, next);
    kinder_env::ActionDelta::new([
        d[0] / spec.max_deltas[0],
        d[1] / spec.max_deltas[1],
        d[2] / spec.max_deltas[2],
        d[3] / spec.max_deltas[3],
        vacuum,
    ])
}
