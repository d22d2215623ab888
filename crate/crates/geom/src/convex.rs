use glam::DVec2;

use crate::shape::{Part, PlacedShape};

/// True iff the two shapes, each eroded by `tol`, strictly overlap.
pub fn collides(a: &PlacedShape, b: &PlacedShape, tol: f64) -> bool {
    let tol = tol.max(0.0);
    let pa: Vec<Part> = a.parts().iter().filter_map(|p| p.eroded(tol)).collect();
    let pb: Vec<Part> = b.parts().iter().filter_map(|p| p.eroded(tol)).collect();
    pa.iter().any(|x| pb.iter().any(|y| parts_overlap(x, y)))
}

pub(crate) fn parts_overlap(a: &Part, b: &Part) -> bool {
    match (*a, *b) {
        (Part::Circle { c: c1, r: r1 }, Part::Circle { c: c2, r: r2 }) => {
            (c1 - c2).length_squared() < (r1 + r2) * (r1 + r2)
        }
        (Part::Circle { c, r }, Part::Rect { c: rc, u, h }) | (Part::Rect { c: rc, u, h }, Part::Circle { c, r }) => {
            let d = local(c - rc, u);
            let q = d.clamp(-h, h);
            (d - q).length_squared() < r * r
        }
        (Part::Rect { c: c1, u: u1, h: h1 }, Part::Rect { c: c2, u: u2, h: h2 }) => {
            let d = c2 - c1;
            for axis in [u1, u1.perp(), u2, u2.perp()] {
                let ra = radius_along(u1, h1, axis);
                let rb = radius_along(u2, h2, axis);
                if d.dot(axis).abs() >= ra + rb {
                    return false;
                }
            }
            true
        }
    }
}

fn local(d: DVec2, u: DVec2) -> DVec2 {
    DVec2::new(d.dot(u), d.dot(u.perp()))
}

fn radius_along(u: DVec2, h: DVec2, axis: DVec2) -> f64 {
    h.x * u.dot(axis).abs() + h.y * u.perp().dot(axis).abs()
}

/// Euclidean gap between two shapes; zero when they touch or overlap.
pub fn distance(a: &PlacedShape, b: &PlacedShape) -> f64 {
    let pa = a.parts();
    let pb = b.parts();
    let mut best = f64::INFINITY;
    for x in &pa {
        for y in &pb {
            best = best.min(part_distance(x, y));
        }
    }
    best
}

fn part_distance(a: &Part, b: &Part) -> f64 {
    match (*a, *b) {
        (Part::Circle { c: c1, r: r1 }, Part::Circle { c: c2, r: r2 }) => ((c1 - c2).length() - r1 - r2).max(0.0),
        (Part::Circle { c, r }, Part::Rect { c: rc, u, h }) | (Part::Rect { c: rc, u, h }, Part::Circle { c, r }) => {
            let d = local(c - rc, u);
            ((d - d.clamp(-h, h)).length() - r).max(0.0)
        }
        (Part::Rect { c: c1, u: u1, h: h1 }, Part::Rect { c: c2, u: u2, h: h2 }) => {
            if parts_overlap(a, b) {
                return 0.0;
            }
            let ca = Part::corners(c1, u1, h1);
            let cb = Part::corners(c2, u2, h2);
            let mut best = f64::INFINITY;
            for i in 0..4 {
                let (a0, a1) = (ca[i], ca[(i + 1) % 4]);
                let (b0, b1) = (cb[i], cb[(i + 1) % 4]);
                for k in 0..4 {
                    best = best.min(point_segment(cb[k], a0, a1));
                    best = best.min(point_segment(ca[k], b0, b1));
                }
            }
            best
        }
    }
}

pub(crate) fn point_segment(p: DVec2, a: DVec2, b: DVec2) -> f64 {
    let ab = b - a;
    let len2 = ab.length_squared();
    let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).length()
}
