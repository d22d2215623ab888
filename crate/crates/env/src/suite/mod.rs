//! The six environments: generators, goals, feasibility certificates, and
//! per-env contact rules.

mod hook;
mod motion;
mod obstruction;
mod retrieval;
mod stick;
mod storage;

use std::sync::OnceLock;

use kinder_geom::{collides, wrap_angle, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EnvError;
use crate::goal::GoalSpec;
use crate::physics::robot_collides;
use crate::robot::{RobotConfig, RobotSpec};
use crate::schema::{button, ObjectType};
use crate::state::{SceneState, ROBOT};
use crate::variant::{EnvId, VariantSpec, WORLD};

pub use hook::{shaft_reach, HOOK_LONG_HALF, HOOK_SHORT_HALF, HOOK_THICK_HALF, MOVABLE_RADIUS, TARGET_RADIUS};
pub use obstruction::{rests_on, ON_TOL, TABLE_TOP};
pub use stick::{
    direct_reach, far_button_min_y, stick_reach, BUTTON_RADIUS, GRASP_MARGIN, STICK_HALF_LEN, STICK_HALF_THICK,
};

/// Rejection-sampling budget for one generation call.
pub const MAX_ATTEMPTS: usize = 10_000;
/// Objects on the table in PushPullHook2D and StickButton2D sit above this line.
pub const TABLE_Y: f64 = 6.0;

pub(crate) mod palette {
    pub const WALL: [f64; 3] = [0.1, 0.1, 0.1];
    pub const TABLE: [f64; 3] = [0.75, 0.6, 0.45];
    pub const SURFACE: [f64; 3] = [0.55, 0.45, 0.35];
    pub const TARGET: [f64; 3] = [0.4, 0.85, 0.4];
    pub const FLOOR: [f64; 3] = [0.95, 0.95, 0.9];
    pub const BLOCK: [f64; 3] = [0.6, 0.6, 0.6];
    pub const TARGET_BLOCK: [f64; 3] = [0.85, 0.3, 0.3];
    pub const STICK: [f64; 3] = [0.55, 0.35, 0.15];
    pub const HOOK: [f64; 3] = [0.3, 0.3, 0.55];
    pub const BUTTON: [f64; 3] = [0.9, 0.75, 0.1];
    pub const PRESSED: [f64; 3] = [0.2, 0.8, 0.2];
}

pub(crate) fn rect_features(
    x: f64,
    y: f64,
    theta: f64,
    hw: f64,
    hh: f64,
    color: [f64; 3],
    is_static: bool,
) -> Vec<f64> {
    vec![x, y, theta, hw, hh, 0.0, color[0], color[1], color[2], if is_static { 1.0 } else { 0.0 }]
}

pub(crate) fn button_features(x: f64, y: f64, r: f64, movable: bool, color: [f64; 3]) -> Vec<f64> {
    vec![x, y, r, 0.0, if movable { 1.0 } else { 0.0 }, color[0], color[1], color[2]]
}

pub(crate) fn add_rect(s: &mut SceneState, name: &str, ty: ObjectType, c: (f64, f64), h: (f64, f64), color: [f64; 3]) {
    let is_static = matches!(ty, ObjectType::Wall | ObjectType::Table | ObjectType::Surface | ObjectType::Region);
    s.insert(name, ty, rect_features(c.0, c.1, 0.0, h.0, h.1, color, is_static));
}

/// A fresh state holding only the robot and the four boundary walls.
pub(crate) fn base_scene(spec: &RobotSpec, cfg: &RobotConfig) -> SceneState {
    let mut s = SceneState::new();
    s.objects.insert(ROBOT.into(), spec.object(cfg));
    let (w, h) = WORLD;
    let t = 0.05;
    add_rect(&mut s, "wall_left", ObjectType::Wall, (-t, h / 2.0), (t, h / 2.0 + 2.0 * t), palette::WALL);
    add_rect(&mut s, "wall_right", ObjectType::Wall, (w + t, h / 2.0), (t, h / 2.0 + 2.0 * t), palette::WALL);
    add_rect(&mut s, "wall_bottom", ObjectType::Wall, (w / 2.0, -t), (w / 2.0, t), palette::WALL);
    add_rect(&mut s, "wall_top", ObjectType::Wall, (w / 2.0, h + t), (w / 2.0, t), palette::WALL);
    s
}

/// Uniform heading in (-π, π].
pub(crate) fn random_heading(rng: &mut ChaCha8Rng) -> f64 {
    wrap_angle(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub(crate) fn rng_for(variant: &VariantSpec, seed: u64) -> ChaCha8Rng {
    // Mix the variant in so different variants with one seed are unrelated.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in variant.to_string().bytes().chain(seed.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Samples a collision-free, certified initial state.
pub fn generate(variant: &VariantSpec, seed: u64) -> Result<SceneState, EnvError> {
    let spec = RobotSpec::default();
    let mut rng = rng_for(variant, seed);
    for _ in 0..MAX_ATTEMPTS {
        let candidate = match variant.env {
            EnvId::Motion2D => motion::sample(variant.count, &spec, &mut rng),
            EnvId::Obstruction2D => obstruction::sample(variant.count, &spec, &mut rng),
            EnvId::ClutteredRetrieval2D => retrieval::sample(variant.count, &spec, &mut rng),
            EnvId::ClutteredStorage2D => storage::sample(variant.count, &spec, &mut rng),
            EnvId::PushPullHook2D => hook::sample(&spec, &mut rng),
            EnvId::StickButton2D => stick::sample(variant.count, &spec, &mut rng),
        };
        if let Some(s) = candidate {
            if initial_penetrations(&s).is_empty() && certify_feasible(&s, variant) {
                return Ok(s);
            }
        }
    }
    Err(EnvError::GenerationFailed { variant: variant.to_string(), attempts: MAX_ATTEMPTS })
}

fn is_static(ty: ObjectType) -> bool {
    matches!(ty, ObjectType::Wall | ObjectType::Table | ObjectType::Surface | ObjectType::Region)
}

/// Pairs of objects that penetrate each other. Static-static pairs, regions,
/// and non-colliding buttons are ignored; the robot is checked with the
/// transition's own collision rule.
pub fn initial_penetrations(s: &SceneState) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if s.get(ROBOT).is_some() && robot_collides(s, &RobotConfig::from_state(s)) {
        out.push((ROBOT.to_string(), "*".to_string()));
    }
    let solid: Vec<_> = s
        .objects
        .iter()
        .filter(|(_, o)| match o.ty {
            ObjectType::Robot | ObjectType::Region => false,
            ObjectType::Button => o.features[button::MOVABLE] > 0.5,
            _ => true,
        })
        .collect();
    for (i, (na, a)) in solid.iter().enumerate() {
        for (nb, b) in &solid[i + 1..] {
            if is_static(a.ty) && is_static(b.ty) {
                continue;
            }
            // Tables only stop the robot base.
            if a.ty == ObjectType::Table || b.ty == ObjectType::Table {
                continue;
            }
            if collides(&a.placed(), &b.placed(), DEFAULT_TOL) {
                out.push((na.to_string(), nb.to_string()));
            }
        }
    }
    out
}

/// Env-specific constructive feasibility checks.
pub fn certify_feasible(s: &SceneState, variant: &VariantSpec) -> bool {
    if s.get(ROBOT).is_none() || s.validate().is_err() {
        return false;
    }
    match variant.env {
        EnvId::Motion2D => motion::certify(s, variant.count),
        EnvId::Obstruction2D => obstruction::certify(s, variant.count),
        EnvId::ClutteredRetrieval2D => retrieval::certify(s, variant.count),
        EnvId::ClutteredStorage2D => storage::certify(s, variant.count),
        EnvId::PushPullHook2D => hook::certify(s),
        EnvId::StickButton2D => stick::certify(s, variant.count),
    }
}

/// Applies button pressing and hook pushing to `after`. `None` means the
/// whole step must be reverted.
pub fn contact_rules(env: EnvId, before: &SceneState, after: SceneState) -> Option<SceneState> {
    match env {
        EnvId::StickButton2D => Some(stick::press(after)),
        EnvId::PushPullHook2D => hook::push(before, after),
        _ => Some(after),
    }
}

/// Public form of the contact rules, reporting a revert as `Err(before)`.
pub fn resolve_contact_rules(env: EnvId, before: &SceneState, after: &SceneState) -> Result<SceneState, SceneState> {
    contact_rules(env, before, after.clone()).ok_or_else(|| before.clone())
}

pub fn goal(env: EnvId) -> &'static GoalSpec {
    static GOALS: OnceLock<Vec<GoalSpec>> = OnceLock::new();
    let all = GOALS.get_or_init(|| {
        EnvId::ALL
            .iter()
            .map(|e| match e {
                EnvId::Motion2D => motion::goal(),
                EnvId::Obstruction2D => obstruction::goal(),
                EnvId::ClutteredRetrieval2D => retrieval::goal(),
                EnvId::ClutteredStorage2D => storage::goal(),
                EnvId::PushPullHook2D => hook::goal(),
                EnvId::StickButton2D => stick::goal(),
            })
            .collect()
    });
    &all[EnvId::ALL.iter().position(|e| *e == env).expect("listed")]
}

/// Axis-aligned extent `(xmin, xmax, ymin, ymax)` of an unrotated rect object.
pub(crate) fn rect_extent(s: &SceneState, name: &str) -> Option<(f64, f64, f64, f64)> {
    let o = s.get(name)?;
    let b = o.placed().aabb();
    Some((b.min.x, b.max.x, b.min.y, b.max.y))
}

pub(crate) fn in_world(x: f64, y: f64, margin: f64) -> bool {
    x >= margin && x <= WORLD.0 - margin && y >= margin && y <= WORLD.1 - margin
}
