use glam::DVec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pose::Pose2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("shape dimension must be strictly positive and finite, got {0}")]
    BadDimension(f64),
    #[error("compound shape has no parts")]
    EmptyCompound,
    #[error("compound shapes may not nest more than one level")]
    TooDeep,
}

/// A shape in its local frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape2 {
    Circle { radius: f64 },
    Rect { half_w: f64, half_h: f64 },
    Compound { parts: Vec<(Shape2, Pose2)> },
}

impl Shape2 {
    pub fn circle(radius: f64) -> Self {
        Shape2::Circle { radius }
    }

    pub fn rect(half_w: f64, half_h: f64) -> Self {
        Shape2::Rect { half_w, half_h }
    }

    pub fn compound(parts: Vec<(Shape2, Pose2)>) -> Self {
        Shape2::Compound { parts }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        self.validate_depth(0)
    }

    fn validate_depth(&self, depth: usize) -> Result<(), GeomError> {
        let check = |v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(GeomError::BadDimension(v))
            }
        };
        match self {
            Shape2::Circle { radius } => check(*radius),
            Shape2::Rect { half_w, half_h } => {
                check(*half_w)?;
                check(*half_h)
            }
            Shape2::Compound { parts } => {
                if depth >= 2 {
                    return Err(GeomError::TooDeep);
                }
                if parts.is_empty() {
                    return Err(GeomError::EmptyCompound);
                }
                parts.iter().try_for_each(|(s, _)| s.validate_depth(depth + 1))
            }
        }
    }

    /// Total area, assuming compound parts do not overlap.
    pub fn area(&self) -> f64 {
        match self {
            Shape2::Circle { radius } => std::f64::consts::PI * radius * radius,
            Shape2::Rect { half_w, half_h } => 4.0 * half_w * half_h,
            Shape2::Compound { parts } => parts.iter().map(|(s, _)| s.area()).sum(),
        }
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: DVec2,
    pub max: DVec2,
}

impl Aabb {
    pub const EMPTY: Aabb = Aabb { min: DVec2::splat(f64::INFINITY), max: DVec2::splat(f64::NEG_INFINITY) };

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb { min: self.min.min(o.min), max: self.max.max(o.max) }
    }

    pub fn intersects(&self, o: &Aabb) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }
}

/// A convex piece of a placed shape, in world coordinates.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Part {
    Circle {
        c: DVec2,
        r: f64,
    },
    /// `u` is the unit local +x axis; `h` holds the half extents.
    Rect {
        c: DVec2,
        u: DVec2,
        h: DVec2,
    },
}

impl Part {
    pub(crate) fn eroded(&self, tol: f64) -> Option<Part> {
        match *self {
            Part::Circle { c, r } => (r > tol).then_some(Part::Circle { c, r: r - tol }),
            Part::Rect { c, u, h } => (h.x > tol && h.y > tol).then_some(Part::Rect { c, u, h: h - DVec2::splat(tol) }),
        }
    }

    pub(crate) fn corners(c: DVec2, u: DVec2, h: DVec2) -> [DVec2; 4] {
        let v = u.perp();
        let ex = u * h.x;
        let ey = v * h.y;
        [c - ex - ey, c + ex - ey, c + ex + ey, c - ex + ey]
    }

    pub(crate) fn aabb(&self) -> Aabb {
        match *self {
            Part::Circle { c, r } => Aabb { min: c - DVec2::splat(r), max: c + DVec2::splat(r) },
            Part::Rect { c, u, h } => {
                let e = DVec2::new((u.x * h.x).abs() + (u.y * h.y).abs(), (u.y * h.x).abs() + (u.x * h.y).abs());
                Aabb { min: c - e, max: c + e }
            }
        }
    }

    pub(crate) fn contains_point(&self, p: DVec2) -> bool {
        match *self {
            Part::Circle { c, r } => (p - c).length_squared() <= r * r,
            Part::Rect { c, u, h } => {
                let d = p - c;
                d.dot(u).abs() <= h.x && d.dot(u.perp()).abs() <= h.y
            }
        }
    }
}

/// A shape placed in the world frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedShape {
    pub shape: Shape2,
    pub pose: Pose2,
}

impl PlacedShape {
    pub fn new(shape: Shape2, pose: Pose2) -> Self {
        Self { shape, pose }
    }

    pub(crate) fn parts(&self) -> Vec<Part> {
        let mut out = Vec::with_capacity(2);
        push_parts(&self.shape, &self.pose, &mut out);
        out
    }

    pub fn aabb(&self) -> Aabb {
        self.parts().iter().fold(Aabb::EMPTY, |acc, p| acc.union(&p.aabb()))
    }

    pub fn contains_point(&self, p: DVec2) -> bool {
        self.parts().iter().any(|part| part.contains_point(p))
    }

    pub fn translated(&self, v: DVec2) -> PlacedShape {
        PlacedShape { shape: self.shape.clone(), pose: self.pose.translated(v) }
    }

    /// World-frame vertices of every rectangle part, four per part.
    pub fn rect_corners(&self) -> Vec<DVec2> {
        self.parts()
            .iter()
            .filter_map(|p| match *p {
                Part::Rect { c, u, h } => Some(Part::corners(c, u, h)),
                Part::Circle { .. } => None,
            })
            .flatten()
            .collect()
    }
}

fn push_parts(shape: &Shape2, pose: &Pose2, out: &mut Vec<Part>) {
    match shape {
        Shape2::Circle { radius } => out.push(Part::Circle { c: pose.translation(), r: *radius }),
        Shape2::Rect { half_w, half_h } => {
            out.push(Part::Rect { c: pose.translation(), u: pose.heading(), h: DVec2::new(*half_w, *half_h) })
        }
        Shape2::Compound { parts } => {
            for (s, local) in parts {
                push_parts(s, &pose.compose(local), out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Shape2::rect(1.0, 0.5).validate().is_ok());
        assert_eq!(Shape2::circle(0.0).validate(), Err(GeomError::BadDimension(0.0)));
        assert_eq!(Shape2::compound(vec![]).validate(), Err(GeomError::EmptyCompound));
        let inner = Shape2::compound(vec![(Shape2::circle(1.0), Pose2::IDENTITY)]);
        let two = Shape2::compound(vec![(inner.clone(), Pose2::IDENTITY)]);
        assert!(two.validate().is_ok());
        let three = Shape2::compound(vec![(two, Pose2::IDENTITY)]);
        assert_eq!(three.validate(), Err(GeomError::TooDeep));
    }

    #[test]
    fn rotated_rect_aabb() {
        let s = PlacedShape::new(Shape2::rect(0.5, 0.5), Pose2::new(0.0, 0.0, std::f64::consts::FRAC_PI_4));
        let b = s.aabb();
        assert!((b.max.x - 0.5f64.hypot(0.5)).abs() < 1e-12);
    }
}
