//! StickButton2D: press every button on the table; some are only reachable
//! with the stick.

use kinder_geom::distance;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, button_features, palette, random_heading, TABLE_Y};
use crate::goal::GoalSpec;
use crate::robot::{RobotConfig, RobotDims, RobotSpec};
use crate::schema::{button, ObjectType};
use crate::state::SceneState;

pub const BUTTON_RADIUS: f64 = 0.15;
pub const STICK_HALF_LEN: f64 = 1.0;
pub const STICK_HALF_THICK: f64 = 0.05;
/// The stick is never grasped closer than this to its end.
pub const GRASP_MARGIN: f64 = 0.1;

pub fn button_name(i: u32) -> String {
    format!("button{i}")
}

/// Highest point the vacuum pad can touch while the base stays off the table.
pub fn direct_reach(dims: &RobotDims) -> f64 {
    TABLE_Y - dims.base_radius + dims.arm_max + 2.0 * dims.vacuum_half_h
}

/// Highest point the stick tip can touch, holding the stick upright.
pub fn stick_reach(dims: &RobotDims) -> f64 {
    TABLE_Y - dims.base_radius + 2.0 * STICK_HALF_LEN - GRASP_MARGIN
}

/// Buttons at or above this height cannot be pressed without the stick.
pub fn far_button_min_y(dims: &RobotDims) -> f64 {
    direct_reach(dims) + BUTTON_RADIUS + 0.1
}

pub(super) fn sample(k: u32, spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let dims = RobotDims::from_spec(spec);
    let cfg =
        RobotConfig::new(rng.random_range(1.0..9.0), rng.random_range(0.8..5.0), random_heading(rng), spec.arm_min);
    let mut s = base_scene(spec, &cfg);
    add_rect(
        &mut s,
        "table",
        ObjectType::Table,
        (5.0, (TABLE_Y + 10.0) / 2.0),
        (5.0, (10.0 - TABLE_Y) / 2.0),
        palette::TABLE,
    );

    let (hx, hy) = (rng.random_range(2.0..8.0), rng.random_range(1.5..3.5));
    add_rect(
        &mut s,
        "holder",
        ObjectType::Region,
        (hx, hy),
        (STICK_HALF_LEN + 0.1, STICK_HALF_THICK + 0.1),
        palette::SURFACE,
    );
    add_rect(&mut s, "stick", ObjectType::Stick, (hx, hy), (STICK_HALF_LEN, STICK_HALF_THICK), palette::STICK);

    let far = k.div_ceil(2) as usize;
    let mut is_far: Vec<bool> = (0..k as usize).map(|i| i < far).collect();
    is_far.shuffle(rng);
    let far_lo = far_button_min_y(&dims);
    let far_hi = stick_reach(&dims) + BUTTON_RADIUS - 0.2;
    let near_hi = direct_reach(&dims) + BUTTON_RADIUS - 0.2;
    let mut placed: Vec<(f64, f64)> = Vec::new();
    for (i, f) in is_far.iter().enumerate() {
        let y = if *f { rng.random_range(far_lo..far_hi) } else { rng.random_range(TABLE_Y + 0.2..near_hi) };
        let x = rng.random_range(0.8..9.2);
        if placed.iter().any(|(px, py)| (px - x).hypot(py - y) < 2.0 * BUTTON_RADIUS + 0.1) {
            return None;
        }
        placed.push((x, y));
        s.insert(
            &button_name(i as u32),
            ObjectType::Button,
            button_features(x, y, BUTTON_RADIUS, false, palette::BUTTON),
        );
    }
    Some(s)
}

pub(super) fn certify(s: &SceneState, k: u32) -> bool {
    if s.get("stick").is_none() || s.get("holder").is_none() {
        return false;
    }
    let buttons: Vec<_> = s.of_type(ObjectType::Button).collect();
    if buttons.len() != k as usize {
        return false;
    }
    let dims = RobotDims::from_state(s);
    let (direct, with_stick) = (direct_reach(&dims), stick_reach(&dims));
    let mut far = 0;
    for (_, b) in &buttons {
        let (y, r) = (b.features[button::Y], b.features[button::RADIUS]);
        if y - r > with_stick {
            return false;
        }
        if y - r > direct {
            far += 1;
        }
    }
    far >= k.div_ceil(2) as usize
}

/// Latches `pressed` on every button touched by the robot or a held stick.
pub(super) fn press(mut s: SceneState) -> SceneState {
    let dims = RobotDims::from_state(&s);
    let cfg = RobotConfig::from_state(&s);
    let mut touchers = vec![dims.base(&cfg), dims.arm(&cfg), dims.vacuum(&cfg)];
    for h in &s.held {
        let o = s.obj(h);
        if o.ty == ObjectType::Stick {
            touchers.push(o.placed());
        }
    }
    let hits: Vec<_> = s
        .of_type(ObjectType::Button)
        .filter(|(_, b)| b.features[button::PRESSED] < 0.5)
        .filter(|(_, b)| {
            let c = b.placed();
            touchers.iter().any(|t| distance(t, &c) <= 0.0)
        })
        .map(|(n, _)| n.clone())
        .collect();
    for n in hits {
        let f = &mut s.get_mut(&n).expect("listed").features;
        f[button::PRESSED] = 1.0;
        f[button::R] = palette::PRESSED[0];
        f[button::G] = palette::PRESSED[1];
        f[button::B] = palette::PRESSED[2];
    }
    s
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("every button is pressed", |s: &SceneState| {
        s.of_type(ObjectType::Button).all(|(_, b)| b.features[button::PRESSED] > 0.5)
    })
}
