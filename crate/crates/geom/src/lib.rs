//! Planar geometry used by every kinder environment.
//!
//! Shapes are circles, oriented rectangles, or unions of those
//! ([`Shape2::Compound`]). All queries reduce compounds to their convex
//! parts and run exact pairwise tests on the parts: closed-form for
//! circles, separating-axis for rectangles.
//!
//! Collision is *strict penetration*: shapes that merely touch do not
//! collide. Queries take an erosion tolerance `tol` that shrinks both shapes
//! before testing, so resting contact within `tol` is never reported.

mod contain;
mod convex;
mod mtv;
mod pose;
mod shape;

pub use contain::contains;
pub use convex::{collides, distance};
pub use mtv::min_translation;
pub use pose::{transform, wrap_angle, Pose2};
pub use shape::{Aabb, GeomError, PlacedShape, Shape2};

pub use glam::DVec2 as Vec2;

/// Default erosion tolerance for collision checks, in meters.
pub const DEFAULT_TOL: f64 = 1e-6;
