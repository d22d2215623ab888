//! Face-contact configurations shared by generators and skills.

use kinder_geom::{Pose2, Vec2};

use crate::physics::ATTACH_EPS;
use crate::robot::{RobotConfig, RobotDims};
use crate::state::ObjectState;

/// Gap left between the vacuum pad and the face it approaches.
pub const APPROACH_GAP: f64 = 0.5 * ATTACH_EPS;

/// Outward normal (local frame) and half length of face `face` of a
/// `hw × hh` rectangle. Faces run counter-clockwise from local +x.
pub fn face_frame(face: usize, hw: f64, hh: f64) -> (Vec2, Vec2, f64) {
    match face % 4 {
        0 => (Vec2::new(hw, 0.0), Vec2::X, hh),
        1 => (Vec2::new(0.0, hh), Vec2::Y, hw),
        2 => (Vec2::new(-hw, 0.0), -Vec2::X, hh),
        _ => (Vec2::new(0.0, -hh), -Vec2::Y, hw),
    }
}

/// A perimeter parameter `s ∈ [0, 1)` mapped to `(face, along ∈ [-1, 1])`,
/// with faces weighted by their length.
pub fn perimeter_point(s: f64, hw: f64, hh: f64) -> (usize, f64) {
    let lens = [2.0 * hh, 2.0 * hw, 2.0 * hh, 2.0 * hw];
    let total: f64 = lens.iter().sum();
    let mut d = s.rem_euclid(1.0) * total;
    for (i, l) in lens.iter().enumerate() {
        if d <= *l || i == 3 {
            return (i, (2.0 * d / l - 1.0).clamp(-1.0, 1.0));
        }
        d -= l;
    }
    unreachable!()
}

/// Robot configuration whose vacuum pad faces `face` of a rectangular
/// object at fraction `along` of the face, separated by [`APPROACH_GAP`].
pub fn face_approach(
    dims: &RobotDims,
    obj_pose: &Pose2,
    hw: f64,
    hh: f64,
    face: usize,
    along: f64,
    ext: f64,
) -> RobotConfig {
    let (center, normal, half_len) = face_frame(face, hw, hh);
    let tangent = normal.perp();
    let local = center + tangent * (along * half_len);
    let p = obj_pose.apply(local);
    let n = obj_pose.rotate(normal);
    let pad = p + n * (dims.vacuum_half_h + APPROACH_GAP);
    let base = pad + n * (ext + dims.vacuum_half_h);
    let heading = -n;
    RobotConfig { pose: Pose2::new(base.x, base.y, heading.y.atan2(heading.x)), ext, vacuum_on: false }
}

/// Rect half extents of a rect-typed object.
pub fn rect_halves(o: &ObjectState) -> (f64, f64) {
    (o.features[crate::schema::rect::HALF_W], o.features[crate::schema::rect::HALF_H])
}
