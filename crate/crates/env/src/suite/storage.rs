//! ClutteredStorage2D: put every block into a U-shaped shelf.

use kinder_geom::contains;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, palette, random_heading};
use crate::goal::GoalSpec;
use crate::grasp::rect_halves;
use crate::robot::{RobotConfig, RobotSpec};
use crate::schema::ObjectType;
use crate::state::SceneState;

/// Shelf interior area must be at least this multiple of the total block area.
pub const AREA_RATIO: f64 = 1.5;
const WALL_HALF: f64 = 0.05;
const SLOT_GAP: f64 = 0.3;

pub fn block_name(i: u32) -> String {
    format!("block{i}")
}

pub(super) fn sample(n: u32, spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let sizes: Vec<f64> = (0..n).map(|_| rng.random_range(0.18..0.24)).collect();
    let max_s = sizes.iter().cloned().fold(0.0, f64::max);
    let width: f64 = sizes.iter().map(|s| 2.0 * s + SLOT_GAP).sum::<f64>() + SLOT_GAP;
    let depth = 2.0 * max_s + 2.0 * SLOT_GAP;
    if width > 9.0 {
        return None;
    }
    let cx = rng.random_range(0.5 + width / 2.0..9.5 - width / 2.0);
    let top = 9.7;
    let cy = top - depth / 2.0;

    let cfg =
        RobotConfig::new(rng.random_range(1.0..9.0), rng.random_range(1.0..5.0), random_heading(rng), spec.arm_min);
    let mut s = base_scene(spec, &cfg);
    add_rect(&mut s, "floor", ObjectType::Region, (5.0, 5.0), (5.0, 5.0), palette::FLOOR);
    add_rect(&mut s, "shelf", ObjectType::Region, (cx, cy), (width / 2.0, depth / 2.0), palette::TARGET);
    add_rect(
        &mut s,
        "shelf_back",
        ObjectType::Wall,
        (cx, top + WALL_HALF),
        (width / 2.0 + 2.0 * WALL_HALF, WALL_HALF),
        palette::WALL,
    );
    add_rect(
        &mut s,
        "shelf_left",
        ObjectType::Wall,
        (cx - width / 2.0 - WALL_HALF, cy),
        (WALL_HALF, depth / 2.0),
        palette::WALL,
    );
    add_rect(
        &mut s,
        "shelf_right",
        ObjectType::Wall,
        (cx + width / 2.0 + WALL_HALF, cy),
        (WALL_HALF, depth / 2.0),
        palette::WALL,
    );

    // Slots along the shelf; some blocks start in them, the rest on the floor.
    let mut slots: Vec<f64> = Vec::new();
    let mut x = cx - width / 2.0 + SLOT_GAP;
    for sz in &sizes {
        slots.push(x + sz);
        x += 2.0 * sz + SLOT_GAP;
    }
    let mut order: Vec<usize> = (0..n as usize).collect();
    order.shuffle(rng);
    let inside = (n / 2) as usize;
    let floor_max_y = cy - depth / 2.0 - 1.0;
    for (k, &i) in order.iter().enumerate() {
        let sz = sizes[i];
        let (bx, by) = if k < inside {
            (slots[k], cy)
        } else {
            (rng.random_range(0.8..9.2), rng.random_range(0.8..floor_max_y.max(0.9)))
        };
        add_rect(&mut s, &block_name(i as u32), ObjectType::Block, (bx, by), (sz, sz), palette::BLOCK);
    }
    Some(s)
}

pub fn shelf_area(s: &SceneState) -> Option<f64> {
    s.get("shelf").map(|o| {
        let (w, h) = rect_halves(o);
        4.0 * w * h
    })
}

pub(super) fn certify(s: &SceneState, n: u32) -> bool {
    let Some(area) = shelf_area(s) else { return false };
    let blocks: Vec<_> = s.of_type(ObjectType::Block).collect();
    if blocks.len() != n as usize {
        return false;
    }
    let total: f64 = blocks.iter().map(|(_, o)| o.shape().area()).sum();
    area >= AREA_RATIO * total
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("every block is inside the shelf", |s: &SceneState| {
        let Some(shelf) = s.get("shelf") else { return false };
        let sp = shelf.placed();
        s.held.is_empty() && s.of_type(ObjectType::Block).all(|(_, b)| contains(&sp, &b.placed()))
    })
}
