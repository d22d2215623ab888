use glam::DVec2;

use crate::shape::{Part, PlacedShape};

const EPS: f64 = 1e-9;

/// True iff every point of `inner` lies in `outer`.
///
/// Each convex part of `inner` must fit inside a single part of `outer`,
/// which is exact whenever `outer` is convex.
pub fn contains(outer: &PlacedShape, inner: &PlacedShape) -> bool {
    let outs = outer.parts();
    inner.parts().iter().all(|ip| outs.iter().any(|op| part_contains(op, ip)))
}

fn part_contains(outer: &Part, inner: &Part) -> bool {
    match (*outer, *inner) {
        (Part::Circle { c, r }, Part::Circle { c: ci, r: ri }) => (ci - c).length() + ri <= r + EPS,
        (Part::Circle { c, r }, Part::Rect { c: ci, u, h }) => {
            Part::corners(ci, u, h).iter().all(|p| (*p - c).length() <= r + EPS)
        }
        (Part::Rect { c, u, h }, Part::Circle { c: ci, r }) => {
            let d = ci - c;
            d.dot(u).abs() + r <= h.x + EPS && d.dot(u.perp()).abs() + r <= h.y + EPS
        }
        (Part::Rect { c, u, h }, Part::Rect { c: ci, u: ui, h: hi }) => {
            Part::corners(ci, ui, hi).iter().all(|p| in_rect(*p - c, u, h))
        }
    }
}

fn in_rect(d: DVec2, u: DVec2, h: DVec2) -> bool {
    d.dot(u).abs() <= h.x + EPS && d.dot(u.perp()).abs() <= h.y + EPS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Pose2, Shape2};

    fn rect(x: f64, y: f64, hw: f64, hh: f64) -> PlacedShape {
        PlacedShape::new(Shape2::rect(hw, hh), Pose2::new(x, y, 0.0))
    }

    #[test]
    fn nested_squares() {
        let outer = rect(0.5, 0.5, 0.5, 0.5);
        assert!(contains(&outer, &rect(0.5, 0.5, 0.1, 0.1)));
        assert!(!contains(&outer, &rect(0.9, 0.5, 0.2, 0.2)));
        assert!(contains(&outer, &outer));
    }

    #[test]
    fn self_containment_rotated_compound() {
        let hook = Shape2::compound(vec![
            (Shape2::rect(0.6, 0.05), Pose2::new(0.0, 0.0, 0.0)),
            (Shape2::rect(0.05, 0.3), Pose2::new(0.55, 0.25, 0.0)),
        ]);
        let s = PlacedShape::new(hook, Pose2::new(1.0, 2.0, 0.7));
        assert!(contains(&s, &s));
    }
}
