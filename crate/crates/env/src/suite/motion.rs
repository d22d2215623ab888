//! Motion2D: drive the base into a target region, optionally through
//! `p` wall columns that each leave one passage.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{add_rect, base_scene, palette, rect_extent};
use crate::goal::GoalSpec;
use crate::robot::{RobotConfig, RobotSpec};
use crate::schema::ObjectType;
use crate::state::SceneState;

pub const TARGET_HALF: f64 = 0.3;
const COLUMN_HALF_W: f64 = 0.1;
/// Slack added to the robot diameter for every passage.
pub const PASSAGE_SLACK: f64 = 0.02;

pub fn passage_names(i: u32) -> (String, String) {
    (format!("passage{i}_lo"), format!("passage{i}_hi"))
}

pub(super) fn sample(p: u32, spec: &RobotSpec, rng: &mut ChaCha8Rng) -> Option<SceneState> {
    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    if p == 0 {
        let (rx, ry): (f64, f64) = (rng.random_range(1.0..9.0), rng.random_range(1.0..9.0));
        let (tx, ty): (f64, f64) = (rng.random_range(0.8..9.2), rng.random_range(0.8..9.2));
        // Chebyshev gap from the base center to the region, in meters.
        let gap = ((tx - rx).abs() - TARGET_HALF).max((ty - ry).abs() - TARGET_HALF);
        if !(1.0..=3.0).contains(&gap) {
            return None;
        }
        let mut s = base_scene(spec, &RobotConfig::new(rx, ry, theta, spec.arm_min));
        add_rect(&mut s, "target", ObjectType::Region, (tx, ty), (TARGET_HALF, TARGET_HALF), palette::TARGET);
        return Some(s);
    }
    let cfg = RobotConfig::new(rng.random_range(0.8..1.3), rng.random_range(1.0..9.0), theta, spec.arm_min);
    let mut s = base_scene(spec, &cfg);
    let span = 7.0 / (p as f64 + 1.0);
    for i in 0..p {
        let x = 1.5 + (i as f64 + 1.0) * span;
        let g = 2.0 * spec.base_radius + PASSAGE_SLACK + rng.random_range(0.0..0.3);
        let yc = rng.random_range(1.0 + g / 2.0..9.0 - g / 2.0);
        let (lo, hi) = passage_names(i);
        let (lo_top, hi_bot) = (yc - g / 2.0, yc + g / 2.0);
        add_rect(&mut s, &lo, ObjectType::Wall, (x, lo_top / 2.0), (COLUMN_HALF_W, lo_top / 2.0), palette::WALL);
        let hh = (10.0 - hi_bot) / 2.0;
        add_rect(&mut s, &hi, ObjectType::Wall, (x, hi_bot + hh), (COLUMN_HALF_W, hh), palette::WALL);
    }
    let (tx, ty) = (rng.random_range(8.4..9.2), rng.random_range(0.8..9.2));
    add_rect(&mut s, "target", ObjectType::Region, (tx, ty), (TARGET_HALF, TARGET_HALF), palette::TARGET);
    Some(s)
}

/// Vertical opening between the two walls of passage `i`.
pub fn passage_gap(s: &SceneState, i: u32) -> Option<f64> {
    let (lo, hi) = passage_names(i);
    let (_, _, _, lo_top) = rect_extent(s, &lo)?;
    let (_, _, hi_bot, _) = rect_extent(s, &hi)?;
    Some(hi_bot - lo_top)
}

pub(super) fn certify(s: &SceneState, p: u32) -> bool {
    let Some(t) = s.get("target") else { return false };
    if t.ty != ObjectType::Region {
        return false;
    }
    let walls = s.of_type(ObjectType::Wall).count();
    if walls != 4 + 2 * p as usize {
        return false;
    }
    let r = s.robot().get("base_radius");
    (0..p).all(|i| passage_gap(s, i).is_some_and(|g| g >= 2.0 * r + PASSAGE_SLACK - 1e-12))
}

pub(super) fn goal() -> GoalSpec {
    GoalSpec::new("the robot base center is inside the target region", |s: &SceneState| {
        let Some(t) = s.get("target") else { return false };
        let r = s.robot();
        t.placed().contains_point(kinder_geom::Vec2::new(r.features[0], r.features[1]))
    })
}
