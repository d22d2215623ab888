//! ClutteredRetrieval2D: the target block is boxed in by obstructions on
//! every side and must be moved into the target region.

use kinder_geom::contains;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, palette, random_heading};
use crate::goal::GoalSpec;
use crate::grasp::{face_approach, rect_halves};
use crate::physics::robot_collides;
use crate::robot::{RobotConfig, RobotDims, RobotSpec};
use crate::schema::ObjectType;
use crate::state::SceneState;

pub const REGION_HALF: f64 = 0.5;
const RING_GAP: f64 = 0.02;
const RING_THICK: f64 = 0.15;

pub fn obstruction_name(i: u32) -> String {
    format!("obstruction{i}")
}

pub(super) fn sample(n: u32, spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let cfg =
        RobotConfig::new(rng.random_range(1.0..9.0), rng.random_range(1.0..9.0), random_heading(rng), spec.arm_min);
    let mut s = base_scene(spec, &cfg);
    add_rect(&mut s, "floor", ObjectType::Region, (5.0, 5.0), (5.0, 5.0), palette::FLOOR);

    let th = rng.random_range(0.2..0.3);
    let (tx, ty): (f64, f64) = (rng.random_range(2.0..8.0), rng.random_range(2.0..8.0));
    let (rx, ry): (f64, f64) = (rng.random_range(1.0..9.0), rng.random_range(1.0..9.0));
    if (rx - tx).hypot(ry - ty) < 2.5 {
        return None;
    }
    add_rect(&mut s, "target_region", ObjectType::Region, (rx, ry), (REGION_HALF, REGION_HALF), palette::TARGET);
    add_rect(&mut s, "target_block", ObjectType::Block, (tx, ty), (th, th), palette::TARGET_BLOCK);

    let off = th + RING_GAP + RING_THICK;
    let ring = [
        ((tx + off, ty), (RING_THICK, th)),
        ((tx, ty + off), (th, RING_THICK)),
        ((tx - off, ty), (RING_THICK, th)),
        ((tx, ty - off), (th, RING_THICK)),
    ];
    for i in 0..n {
        let (c, h) = if (i as usize) < ring.len() {
            ring[i as usize]
        } else {
            let h = (rng.random_range(0.15..0.3), rng.random_range(0.15..0.3));
            ((rng.random_range(0.8..9.2), rng.random_range(0.8..9.2)), h)
        };
        add_rect(&mut s, &obstruction_name(i), ObjectType::Block, c, h, palette::BLOCK);
    }
    Some(s)
}

pub(super) fn certify(s: &SceneState, n: u32) -> bool {
    let (Some(region), Some(block)) = (s.get("target_region"), s.get("target_block")) else { return false };
    let count = (0..n).filter(|i| s.get(&obstruction_name(*i)).is_some()).count();
    if count != n as usize || s.of_type(ObjectType::Block).count() != n as usize + 1 {
        return false;
    }
    let (bw, bh) = rect_halves(block);
    let (rw, rh) = rect_halves(region);
    if rw < bw + 0.05 || rh < bh + 0.05 {
        return false;
    }
    if n == 0 {
        return true;
    }
    // Some ring member must be graspable from its outward face.
    let dims = RobotDims::from_state(s);
    (0..n.min(4)).any(|i| {
        let o = s.obj(&obstruction_name(i));
        let (hw, hh) = rect_halves(o);
        let face = i as usize;
        let cfg = face_approach(&dims, &o.pose(), hw, hh, face, 0.0, dims.arm_min);
        super::in_world(cfg.pose.x, cfg.pose.y, dims.base_radius) && !robot_collides(s, &cfg)
    })
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("the target block is inside the target region", |s: &SceneState| {
        let (Some(r), Some(b)) = (s.get("target_region"), s.get("target_block")) else { return false };
        !s.is_held("target_block") && contains(&r.placed(), &b.placed())
    })
}
