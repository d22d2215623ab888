use kinder_geom::{wrap_angle, PlacedShape, Pose2, Shape2};
use serde::{Deserialize, Serialize};

use crate::schema::{robot as rf, ObjectType};
use crate::state::{ObjectState, SceneState, ROBOT};

/// Half thickness of the arm link.
pub const ARM_HALF_THICK: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub base_radius: f64,
    pub arm_min: f64,
    pub arm_max: f64,
    /// Half extent of the vacuum across the heading.
    pub vacuum_half_w: f64,
    /// Half extent of the vacuum along the heading.
    pub vacuum_half_h: f64,
    /// Per-step limits for dx, dy, dθ, d_ext.
    pub max_deltas: [f64; 4],
}

impl Default for RobotSpec {
    fn default() -> Self {
        Self {
            base_radius: 0.3,
            arm_min: 0.4,
            arm_max: 1.2,
            vacuum_half_w: 0.2,
            vacuum_half_h: 0.05,
            max_deltas: [0.05, 0.05, 0.1, 0.05],
        }
    }
}

impl RobotSpec {
    pub fn is_valid(&self) -> bool {
        self.base_radius > 0.0
            && self.arm_min >= self.base_radius
            && self.arm_max > self.arm_min
            && self.vacuum_half_w > 0.0
            && self.vacuum_half_h > 0.0
            && self.max_deltas.iter().all(|d| *d > 0.0)
    }

    /// Robot object features for a given configuration.
    pub fn features(&self, cfg: &RobotConfig) -> Vec<f64> {
        vec![
            cfg.pose.x,
            cfg.pose.y,
            cfg.pose.theta,
            cfg.ext,
            if cfg.vacuum_on { 1.0 } else { 0.0 },
            self.base_radius,
            self.arm_min,
            self.arm_max,
            self.vacuum_half_w,
            self.vacuum_half_h,
        ]
    }

    pub fn object(&self, cfg: &RobotConfig) -> ObjectState {
        ObjectState::new(ObjectType::Robot, self.features(cfg))
    }

    /// Distance from the base center to the far face of the vacuum at full extension.
    pub fn reach(&self) -> f64 {
        self.arm_max + 2.0 * self.vacuum_half_h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotConfig {
    pub pose: Pose2,
    pub ext: f64,
    pub vacuum_on: bool,
}

impl RobotConfig {
    pub fn new(x: f64, y: f64, theta: f64, ext: f64) -> Self {
        Self { pose: Pose2::new(x, y, theta), ext, vacuum_on: false }
    }

    pub fn from_state(s: &SceneState) -> Self {
        let f = &s.robot().features;
        Self {
            pose: Pose2 { x: f[rf::X], y: f[rf::Y], theta: f[rf::THETA] },
            ext: f[rf::EXT],
            vacuum_on: f[rf::VACUUM] > 0.5,
        }
    }

    pub fn write_to(&self, s: &mut SceneState) {
        let f = &mut s.objects.get_mut(ROBOT).expect("robot present").features;
        f[rf::X] = self.pose.x;
        f[rf::Y] = self.pose.y;
        f[rf::THETA] = self.pose.theta;
        f[rf::EXT] = self.ext;
        f[rf::VACUUM] = if self.vacuum_on { 1.0 } else { 0.0 };
    }

    /// The 4-vector (x, y, θ, ext).
    pub fn vec4(&self) -> [f64; 4] {
        [self.pose.x, self.pose.y, self.pose.theta, self.ext]
    }
}

/// Robot geometry as read from the robot's own features.
#[derive(Clone, Copy, Debug)]
pub struct RobotDims {
    pub base_radius: f64,
    pub arm_min: f64,
    pub arm_max: f64,
    pub vacuum_half_w: f64,
    pub vacuum_half_h: f64,
}

impl RobotDims {
    pub fn from_state(s: &SceneState) -> Self {
        let f = &s.robot().features;
        Self {
            base_radius: f[rf::BASE_RADIUS],
            arm_min: f[rf::ARM_MIN],
            arm_max: f[rf::ARM_MAX],
            vacuum_half_w: f[rf::VAC_HALF_W],
            vacuum_half_h: f[rf::VAC_HALF_H],
        }
    }

    pub fn from_spec(s: &RobotSpec) -> Self {
        Self {
            base_radius: s.base_radius,
            arm_min: s.arm_min,
            arm_max: s.arm_max,
            vacuum_half_w: s.vacuum_half_w,
            vacuum_half_h: s.vacuum_half_h,
        }
    }

    /// Center frame of the vacuum pad; local +x points along the heading.
    pub fn vacuum_pose(&self, cfg: &RobotConfig) -> Pose2 {
        cfg.pose.compose(&Pose2::new(cfg.ext + self.vacuum_half_h, 0.0, 0.0))
    }

    pub fn base(&self, cfg: &RobotConfig) -> PlacedShape {
        PlacedShape::new(Shape2::circle(self.base_radius), Pose2 { theta: 0.0, ..cfg.pose })
    }

    pub fn arm(&self, cfg: &RobotConfig) -> PlacedShape {
        PlacedShape::new(
            Shape2::rect(cfg.ext / 2.0, ARM_HALF_THICK),
            cfg.pose.compose(&Pose2::new(cfg.ext / 2.0, 0.0, 0.0)),
        )
    }

    pub fn vacuum(&self, cfg: &RobotConfig) -> PlacedShape {
        PlacedShape::new(Shape2::rect(self.vacuum_half_h, self.vacuum_half_w), self.vacuum_pose(cfg))
    }
}

/// A 5-component action in `[-1, 1]`: base dx, dy, dθ, arm extension, vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionDelta(pub [f64; 5]);

impl ActionDelta {
    pub const ZERO: ActionDelta = ActionDelta([0.0; 5]);

    /// Clamps every component to `[-1, 1]`; NaN becomes 0.
    pub fn new(u: [f64; 5]) -> Self {
        ActionDelta(u.map(|v| if v.is_nan() { 0.0 } else { v.clamp(-1.0, 1.0) }))
    }

    pub fn clamped(&self) -> Self {
        Self::new(self.0)
    }

    pub fn vacuum(&self) -> f64 {
        self.0[4]
    }
}

/// Applies the scaled deltas to a configuration; the vacuum is left untouched.
pub fn integrate(cfg: &RobotConfig, a: &ActionDelta, spec: &RobotSpec, dims: &RobotDims) -> RobotConfig {
    let u = a.0;
    let d = spec.max_deltas;
    RobotConfig {
        pose: Pose2 {
            x: cfg.pose.x + u[0] * d[0],
            y: cfg.pose.y + u[1] * d[1],
            theta: wrap_angle(cfg.pose.theta + u[2] * d[2]),
        },
        ext: (cfg.ext + u[3] * d[3]).clamp(dims.arm_min, dims.arm_max),
        vacuum_on: cfg.vacuum_on,
    }
}
