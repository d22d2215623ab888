//! Obstruction2D (side view): put the target block on the target surface,
//! clearing any obstructions that sit on it first.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, palette, rect_extent};
use crate::goal::GoalSpec;
use crate::robot::{RobotConfig, RobotSpec};
use crate::schema::{rect, ObjectType};
use crate::state::SceneState;

pub const TABLE_TOP: f64 = 1.0;
/// Allowed gap between a resting block and the surface top.
pub const ON_TOL: f64 = 1e-4;
const SURFACE_HALF_H: f64 = 0.01;
const MIN_BLOCK_GAP: f64 = 0.25;
const SURFACE_MARGIN: f64 = 0.02;

pub fn obstruction_name(i: u32) -> String {
    format!("obstruction{i}")
}

pub(super) fn sample(n: u32, spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let cfg = RobotConfig::new(
        rng.random_range(1.0..9.0),
        rng.random_range(3.0..5.0),
        -std::f64::consts::FRAC_PI_2 + rng.random_range(-0.5..0.5),
        spec.arm_min,
    );
    let mut s = base_scene(spec, &cfg);
    add_rect(&mut s, "table", ObjectType::Surface, (5.0, TABLE_TOP / 2.0), (5.0, TABLE_TOP / 2.0), palette::TABLE);

    let bw = rng.random_range(0.2..0.3);
    let bh = rng.random_range(0.15..0.3);
    let sw = bw + rng.random_range(0.1..0.2);
    let sx = rng.random_range(3.0..8.0);
    add_rect(
        &mut s,
        "target_surface",
        ObjectType::Surface,
        (sx, TABLE_TOP - SURFACE_HALF_H),
        (sw, SURFACE_HALF_H),
        palette::TARGET,
    );

    let mut spans: Vec<(f64, f64)> = Vec::new();
    let free = |spans: &[(f64, f64)], lo: f64, hi: f64| {
        lo >= 0.3 && hi <= 9.7 && spans.iter().all(|&(a, b)| hi + MIN_BLOCK_GAP <= a || lo >= b + MIN_BLOCK_GAP)
    };

    for i in 0..n {
        let hw = rng.random_range(0.15..0.3);
        let hh = rng.random_range(0.15..0.35);
        let on_surface = rng.random_bool(if i == 0 { 0.9 } else { 0.4 });
        let x = if on_surface { sx + rng.random_range(-sw..sw) * 0.6 } else { rng.random_range(0.5..9.5) };
        if !free(&spans, x - hw, x + hw) {
            return None;
        }
        spans.push((x - hw, x + hw));
        add_rect(&mut s, &obstruction_name(i), ObjectType::Block, (x, TABLE_TOP + hh), (hw, hh), palette::BLOCK);
    }

    let tx = rng.random_range(0.5..9.5);
    if (tx - sx).abs() < sw + bw || !free(&spans, tx - bw, tx + bw) {
        return None;
    }
    add_rect(&mut s, "target_block", ObjectType::Block, (tx, TABLE_TOP + bh), (bw, bh), palette::TARGET_BLOCK);
    Some(s)
}

/// Side-view "on": resting on the top edge, horizontally within it.
pub fn rests_on(s: &SceneState, block: &str, surface: &str) -> bool {
    let (Some(b), Some(f)) = (rect_extent(s, block), rect_extent(s, surface)) else { return false };
    let gap = b.2 - f.3;
    (0.0..=ON_TOL).contains(&gap) && b.0 >= f.0 - 1e-9 && b.1 <= f.1 + 1e-9
}

pub(super) fn certify(s: &SceneState, n: u32) -> bool {
    let (Some(tb), Some(ts)) = (s.get("target_block"), s.get("target_surface")) else { return false };
    let blocks = s.of_type(ObjectType::Block).count();
    if blocks != n as usize + 1 || s.get("table").is_none() {
        return false;
    }
    // The surface must fit the target block with margin to spare.
    2.0 * ts.features[rect::HALF_W] >= 2.0 * tb.features[rect::HALF_W] + SURFACE_MARGIN
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("the target block rests on the target surface, fully within its width", |s: &SceneState| {
        !s.is_held("target_block") && rests_on(s, "target_block", "target_surface")
    })
}
