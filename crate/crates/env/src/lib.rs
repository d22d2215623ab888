//! Kinematic 2D environments.
//!
//! A [`SceneState`] maps object names to typed feature vectors. The robot
//! is a circular base with a 1D extendable arm ending in a rectangular
//! vacuum pad. Each [`step`] applies a bounded configuration delta; if the
//! robot or anything it carries would penetrate an obstacle, the motion is
//! undone. Reward is −1 per step until the goal holds.

mod env;
mod error;
mod flatten;
mod goal;
pub mod grasp;
mod noise;
mod physics;
mod render;
mod robot;
pub mod schema;
mod state;
pub mod suite;
mod variant;

pub use env::{reset, Env};
pub use error::EnvError;
pub use flatten::{flatten, unflatten, Layout};
pub use goal::{check_goal, GoalSpec};
pub use noise::{noisy_action, noisy_observation};
pub use physics::{attach_scan, carried_poses, place_robot, robot_collides, step, StepInfo, StepOutcome, ATTACH_EPS};
pub use render::{render, RgbImage, BACKGROUND};
pub use robot::{integrate, ActionDelta, RobotConfig, RobotDims, RobotSpec, ARM_HALF_THICK};
pub use schema::ObjectType;
pub use state::{hook_shape, write_f64, ObjectState, SceneState, ROBOT};
pub use suite::{certify_feasible, generate, goal, initial_penetrations, resolve_contact_rules};
pub use variant::{EnvId, VariantSpec, WORLD};
