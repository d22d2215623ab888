//! The kinematic transition: move, revert on penetration, vacuum, contact rules.

use std::sync::Arc;

use kinder_geom::{collides, distance, PlacedShape, Pose2, DEFAULT_TOL};

use crate::robot::{integrate, ActionDelta, RobotConfig, RobotDims, RobotSpec};
use crate::schema::{button, ObjectType};
use crate::state::{ObjectState, SceneState};
use crate::suite;
use crate::variant::EnvId;

/// How close the vacuum pad must be to an object to pick it up.
pub const ATTACH_EPS: f64 = 1e-2;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepInfo {
    pub reverted: bool,
    pub newly_attached: Vec<Arc<str>>,
    pub released: Vec<Arc<str>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub state: SceneState,
    pub reward: f64,
    pub terminated: bool,
    pub info: StepInfo,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Body {
    Base,
    Arm,
    Held,
}

fn blocks(o: &ObjectState, held: bool, body: Body) -> bool {
    match o.ty {
        ObjectType::Robot | ObjectType::Region => false,
        ObjectType::Wall | ObjectType::Surface => true,
        ObjectType::Table => body == Body::Base,
        ObjectType::Block | ObjectType::Stick | ObjectType::Hook => !held,
        ObjectType::Button => o.features[button::MOVABLE] > 0.5 && body != Body::Held,
    }
}

/// World poses that the held objects would take if the robot moved from
/// its configuration in `state` to `to`.
pub fn carried_poses(state: &SceneState, to: &RobotConfig) -> Vec<(Arc<str>, Pose2)> {
    if state.held.is_empty() {
        return Vec::new();
    }
    let dims = RobotDims::from_state(state);
    let from = RobotConfig::from_state(state);
    let vf = dims.vacuum_pose(&from);
    let vt = dims.vacuum_pose(to);
    let inv = vf.inverse();
    state
        .held
        .iter()
        .map(|n| {
            let rel = inv.compose(&state.obj(n).pose());
            (n.clone(), vt.compose(&rel))
        })
        .collect()
}

/// Would the robot (and whatever it carries) penetrate anything at `cfg`?
pub fn robot_collides(state: &SceneState, cfg: &RobotConfig) -> bool {
    let dims = RobotDims::from_state(state);
    let base = dims.base(cfg);
    let arm = dims.arm(cfg);
    let vac = dims.vacuum(cfg);
    let carried: Vec<PlacedShape> =
        carried_poses(state, cfg).into_iter().map(|(n, p)| PlacedShape::new(state.obj(&n).shape(), p)).collect();
    let reach = cfg.ext + 2.0 * dims.vacuum_half_w + 2.0 * dims.vacuum_half_h;
    for (name, o) in &state.objects {
        let held = state.is_held(name);
        let shape = o.placed();
        let aabb = shape.aabb();
        // Cheap reject against a disc that bounds the whole robot arm.
        let c = cfg.pose.translation();
        let near = c.x + reach >= aabb.min.x
            && c.x - reach <= aabb.max.x
            && c.y + reach >= aabb.min.y
            && c.y - reach <= aabb.max.y;
        if near {
            if blocks(o, held, Body::Base) && collides(&base, &shape, DEFAULT_TOL) {
                return true;
            }
            if blocks(o, held, Body::Arm)
                && (collides(&arm, &shape, DEFAULT_TOL) || collides(&vac, &shape, DEFAULT_TOL))
            {
                return true;
            }
        }
        if !carried.is_empty() && blocks(o, held, Body::Held) {
            for h in &carried {
                if h.aabb().intersects(&aabb) && collides(h, &shape, DEFAULT_TOL) {
                    return true;
                }
            }
        }
    }
    false
}

/// Graspable, unheld objects within [`ATTACH_EPS`] of the vacuum pad.
pub fn attach_scan(state: &SceneState) -> Vec<Arc<str>> {
    let dims = RobotDims::from_state(state);
    let cfg = RobotConfig::from_state(state);
    let vac = dims.vacuum(&cfg);
    state
        .objects
        .iter()
        .filter(|(n, o)| o.ty.is_graspable() && !state.is_held(n))
        .filter(|(_, o)| distance(&vac, &o.placed()) <= ATTACH_EPS)
        .map(|(n, _)| n.clone())
        .collect()
}

/// Moves the robot to `cfg`, carrying held objects, without any checks.
pub fn place_robot(state: &mut SceneState, cfg: &RobotConfig) {
    for (n, p) in carried_poses(state, cfg) {
        state.get_mut(&n).expect("held object").set_pose(p);
    }
    cfg.write_to(state);
}

/// One transition of env `env`. Never fails: actions are clamped.
pub fn step(env: EnvId, spec: &RobotSpec, state: &SceneState, action: ActionDelta) -> StepOutcome {
    let a = action.clamped();
    let dims = RobotDims::from_state(state);
    let cfg = RobotConfig::from_state(state);
    let target = integrate(&cfg, &a, spec, &dims);
    let mut next = state.clone();
    let mut info = StepInfo::default();

    if target.vec4() != cfg.vec4() {
        if robot_collides(state, &target) {
            info.reverted = true;
        } else {
            place_robot(&mut next, &target);
        }
    }

    let u = a.vacuum();
    let mut moved = RobotConfig::from_state(&next);
    if u > 0.0 && !moved.vacuum_on {
        moved.vacuum_on = true;
        moved.write_to(&mut next);
        for n in attach_scan(&next) {
            next.get_mut(&n).expect("scanned").set_held(true);
            next.held.push(n.clone());
            info.newly_attached.push(n);
        }
    } else if u < 0.0 && moved.vacuum_on {
        moved.vacuum_on = false;
        moved.write_to(&mut next);
        for n in std::mem::take(&mut next.held) {
            next.get_mut(&n).expect("held").set_held(false);
            info.released.push(n);
        }
    }

    match suite::contact_rules(env, state, next) {
        Some(s) => next = s,
        None => {
            next = state.clone();
            info = StepInfo { reverted: true, ..Default::default() };
        }
    }

    let terminated = suite::goal(env).holds(&next);
    StepOutcome { state: next, reward: -1.0, terminated, info }
}
