use std::f64::consts::PI;

use glam::DVec2;
use serde::{Deserialize, Serialize};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// A rigid transform in SE(2). `theta` is kept in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Default for Pose2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Pose2 {
    pub const IDENTITY: Pose2 = Pose2 { x: 0.0, y: 0.0, theta: 0.0 };

    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta: wrap_angle(theta) }
    }

    pub fn from_translation(p: DVec2) -> Self {
        Self::new(p.x, p.y, 0.0)
    }

    pub fn translation(&self) -> DVec2 {
        DVec2::new(self.x, self.y)
    }

    /// Unit vector along the local +x axis.
    pub fn heading(&self) -> DVec2 {
        DVec2::from_angle(self.theta)
    }

    /// Maps a point from this frame into the parent frame.
    pub fn apply(&self, p: DVec2) -> DVec2 {
        DVec2::from_angle(self.theta).rotate(p) + self.translation()
    }

    /// Maps a parent-frame point into this frame.
    pub fn apply_inverse(&self, p: DVec2) -> DVec2 {
        DVec2::from_angle(-self.theta).rotate(p - self.translation())
    }

    /// Rotates a direction into the parent frame.
    pub fn rotate(&self, v: DVec2) -> DVec2 {
        DVec2::from_angle(self.theta).rotate(v)
    }

    /// `self ∘ other`: `other` expressed in this frame, mapped to the parent.
    pub fn compose(&self, other: &Pose2) -> Pose2 {
        let t = self.apply(other.translation());
        Pose2::new(t.x, t.y, self.theta + other.theta)
    }

    pub fn inverse(&self) -> Pose2 {
        let t = DVec2::from_angle(-self.theta).rotate(-self.translation());
        Pose2::new(t.x, t.y, -self.theta)
    }

    /// Same orientation, shifted by `v` in the parent frame.
    pub fn translated(&self, v: DVec2) -> Pose2 {
        Pose2 { x: self.x + v.x, y: self.y + v.y, theta: self.theta }
    }
}

/// SE(2) composition `p ∘ q`.
pub fn transform(p: &Pose2, q: &Pose2) -> Pose2 {
    p.compose(q)
}
