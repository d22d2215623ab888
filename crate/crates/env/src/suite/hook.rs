//! PushPullHook2D: use an L-shaped hook to slide a movable button on the
//! table until it covers the target button.

use kinder_geom::{collides, min_translation, DEFAULT_TOL};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, button_features, palette, random_heading, TABLE_Y};
use crate::goal::GoalSpec;
use crate::robot::{RobotConfig, RobotDims, RobotSpec};
use crate::schema::{button, ObjectType};
use crate::state::SceneState;

pub const HOOK_LONG_HALF: f64 = 1.0;
pub const HOOK_SHORT_HALF: f64 = 0.35;
pub const HOOK_THICK_HALF: f64 = 0.05;
pub const MOVABLE_RADIUS: f64 = 0.15;
pub const TARGET_RADIUS: f64 = 0.2;

pub(super) fn sample(spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let cfg =
        RobotConfig::new(rng.random_range(1.0..9.0), rng.random_range(0.8..3.0), random_heading(rng), spec.arm_min);
    let mut s = base_scene(spec, &cfg);
    add_rect(
        &mut s,
        "table",
        ObjectType::Table,
        (5.0, (TABLE_Y + 10.0) / 2.0),
        (5.0, (10.0 - TABLE_Y) / 2.0),
        palette::TABLE,
    );
    let hook = vec![
        rng.random_range(2.5..7.5),
        rng.random_range(3.0..4.5),
        rng.random_range(-0.4..0.4),
        HOOK_LONG_HALF,
        HOOK_SHORT_HALF,
        HOOK_THICK_HALF,
        0.0,
        palette::HOOK[0],
        palette::HOOK[1],
        palette::HOOK[2],
    ];
    s.insert("hook", ObjectType::Hook, hook);
    let by = rng.random_range(6.5..7.2);
    let bx = rng.random_range(2.0..8.0);
    let dist = rng.random_range(1.0..2.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let tx = bx + dist;
    if !(1.0..=9.0).contains(&tx) {
        return None;
    }
    let ty = by + rng.random_range(-0.02..0.02);
    s.insert("movable_button", ObjectType::Button, button_features(bx, by, MOVABLE_RADIUS, true, palette::BUTTON));
    s.insert("target_button", ObjectType::Button, button_features(tx, ty, TARGET_RADIUS, false, palette::TARGET));
    Some(s)
}

/// Highest point the hook shaft can cover while the base stays off the table.
pub fn shaft_reach(dims: &RobotDims) -> f64 {
    TABLE_Y - dims.base_radius + 2.0 * HOOK_LONG_HALF - 0.2
}

pub(super) fn certify(s: &SceneState) -> bool {
    let (Some(m), Some(t), Some(_)) = (s.get("movable_button"), s.get("target_button"), s.get("hook")) else {
        return false;
    };
    let dims = RobotDims::from_state(s);
    let (mx, my) = (m.features[button::X], m.features[button::Y]);
    let (tx, ty) = (t.features[button::X], t.features[button::Y]);
    let reachable = my + 0.3 <= shaft_reach(&dims) && my > TABLE_Y;
    let lane_clear = (my - ty).abs() < t.features[button::RADIUS];
    reachable
        && lane_clear
        && (mx - tx).abs() > t.features[button::RADIUS]
        && s.of_type(ObjectType::Button).count() == 2
}

/// Quasi-static pushing: a held hook that penetrates the movable button
/// shoves it out along the minimum translation.
pub(super) fn push(_before: &SceneState, mut after: SceneState) -> Option<SceneState> {
    if !after.is_held("hook") {
        return Some(after);
    }
    let hook = after.obj("hook").placed();
    let button = after.obj("movable_button").placed();
    if !collides(&hook, &button, 0.0) {
        return Some(after);
    }
    let t = min_translation(&hook, &button)?;
    let moved = button.translated(t);
    let dims = RobotDims::from_state(&after);
    let cfg = RobotConfig::from_state(&after);
    let robot = [dims.base(&cfg), dims.arm(&cfg), dims.vacuum(&cfg)];
    if robot.iter().any(|r| collides(r, &moved, DEFAULT_TOL)) {
        return None;
    }
    let blocked = after
        .objects
        .values()
        .filter(|o| matches!(o.ty, ObjectType::Wall | ObjectType::Surface))
        .any(|o| collides(&o.placed(), &moved, DEFAULT_TOL));
    if blocked {
        return None;
    }
    let f = &mut after.get_mut("movable_button").expect("checked").features;
    f[button::X] += t.x;
    f[button::Y] += t.y;
    Some(after)
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("the movable button is on top of the target button", |s: &SceneState| {
        let (Some(m), Some(t)) = (s.get("movable_button"), s.get("target_button")) else { return false };
        let d = (m.features[button::X] - t.features[button::X]).hypot(m.features[button::Y] - t.features[button::Y]);
        d <= t.features[button::RADIUS]
    })
}
