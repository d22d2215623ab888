//! Minimum translation vector via exact translation-space geometry.
//!
//! Translating `b` by `t` makes a part pair overlap iff `t` lies in the open
//! Minkowski difference of the parts, a convex polygon dilated by a radius.
//! The answer is the nearest point to the origin outside the union of those
//! sets. It lies either at a local distance minimum on one set's boundary or
//! at a crossing of two boundaries, so we enumerate both kinds of candidates
//! and keep the shortest one that every set leaves uncovered.

use std::f64::consts::TAU;

use glam::DVec2;

use crate::convex::{collides, parts_overlap, point_segment};
use crate::shape::{Part, PlacedShape};

const ON_BOUNDARY: f64 = 1e-10;
const TIE: f64 = 1e-12;

/// Shortest translation of `b` that separates it from `a`, or `None` when
/// they do not collide. Equal-length answers resolve to the smallest
/// counter-clockwise angle from +x.
pub fn min_translation(a: &PlacedShape, b: &PlacedShape) -> Option<DVec2> {
    if !collides(a, b, 0.0) {
        return None;
    }
    let pa = a.parts();
    let pb = b.parts();
    let sets: Vec<RoundedPoly> =
        pa.iter().flat_map(|x| pb.iter().map(move |y| (x, y))).map(|(x, y)| RoundedPoly::difference(x, y)).collect();

    let mut cands: Vec<DVec2> = Vec::new();
    for s in &sets {
        s.local_minima(&mut cands);
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            sets[i].crossings(&sets[j], &mut cands);
        }
    }

    let mut best: Option<(f64, f64, DVec2)> = None;
    for t in cands {
        if sets.iter().any(|s| s.signed_distance(t) < -ON_BOUNDARY) {
            continue;
        }
        let n = t.length();
        let ang = angle_of(t);
        let better = match best {
            None => true,
            Some((bn, ba, _)) => n < bn - TIE || (n <= bn + TIE && ang < ba),
        };
        if better {
            best = Some((n, ang, t));
        }
    }
    debug_assert!(best.is_some() || pa.iter().all(|x| pb.iter().all(|y| !parts_overlap(x, y))));
    best.map(|(_, _, t)| t)
}

fn angle_of(t: DVec2) -> f64 {
    if t.length_squared() == 0.0 {
        return 0.0;
    }
    let a = t.y.atan2(t.x).rem_euclid(TAU);
    // Directions a hair below +x wrap to ~2π; fold them back.
    if TAU - a < 1e-12 {
        0.0
    } else {
        a
    }
}

/// A convex polygon (counter-clockwise, possibly a single vertex) dilated by `r`.
struct RoundedPoly {
    verts: Vec<DVec2>,
    r: f64,
}

impl RoundedPoly {
    /// Translations of `b`'s part that make it overlap `a`'s part.
    fn difference(a: &Part, b: &Part) -> RoundedPoly {
        match (*a, *b) {
            (Part::Circle { c: ca, r: ra }, Part::Circle { c: cb, r: rb }) => {
                RoundedPoly { verts: vec![ca - cb], r: ra + rb }
            }
            (Part::Circle { c: ca, r }, Part::Rect { c, u, h }) => {
                RoundedPoly { verts: ccw(Part::corners(c, u, h).iter().map(|p| ca - *p).collect()), r }
            }
            (Part::Rect { c, u, h }, Part::Circle { c: cb, r }) => {
                RoundedPoly { verts: ccw(Part::corners(c, u, h).iter().map(|p| *p - cb).collect()), r }
            }
            (Part::Rect { c: c1, u: u1, h: h1 }, Part::Rect { c: c2, u: u2, h: h2 }) => {
                let ka = Part::corners(c1, u1, h1);
                let kb = Part::corners(c2, u2, h2);
                let pts: Vec<DVec2> = ka.iter().flat_map(|p| kb.iter().map(move |q| *p - *q)).collect();
                RoundedPoly { verts: hull(pts), r: 0.0 }
            }
        }
    }

    fn edges(&self) -> impl Iterator<Item = (DVec2, DVec2, DVec2)> + '_ {
        let n = self.verts.len();
        (0..n).filter(move |_| n >= 2).map(move |i| {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let nrm = (b - a).normalize().perp() * -1.0;
            (a, b, nrm)
        })
    }

    /// Negative strictly inside, zero on the boundary.
    fn signed_distance(&self, p: DVec2) -> f64 {
        if self.verts.len() == 1 {
            return (p - self.verts[0]).length() - self.r;
        }
        let mut max_out = f64::NEG_INFINITY;
        for (a, _, n) in self.edges() {
            max_out = max_out.max((p - a).dot(n));
        }
        if max_out <= 0.0 {
            return max_out - self.r;
        }
        let d = self.edges().map(|(a, b, _)| point_segment(p, a, b)).fold(f64::INFINITY, f64::min);
        d - self.r
    }

    fn offset_segments(&self) -> Vec<(DVec2, DVec2)> {
        self.edges().map(|(a, b, n)| (a + n * self.r, b + n * self.r)).collect()
    }

    fn local_minima(&self, out: &mut Vec<DVec2>) {
        for (a, b) in self.offset_segments() {
            out.push(closest_on_segment(DVec2::ZERO, a, b));
            out.push(a);
        }
        for &v in &self.verts {
            if self.r > 0.0 {
                let len = v.length();
                let dir = if len > 0.0 { -v / len } else { DVec2::X };
                out.push(v + dir * self.r);
            } else {
                out.push(v);
            }
        }
    }

    fn crossings(&self, other: &RoundedPoly, out: &mut Vec<DVec2>) {
        let sa = self.offset_segments();
        let sb = other.offset_segments();
        for &(a0, a1) in &sa {
            for &(b0, b1) in &sb {
                if let Some(p) = segment_segment(a0, a1, b0, b1) {
                    out.push(p);
                }
            }
            if other.r > 0.0 {
                for &v in &other.verts {
                    segment_circle(a0, a1, v, other.r, out);
                }
            }
        }
        if self.r > 0.0 {
            for &v in &self.verts {
                for &(b0, b1) in &sb {
                    segment_circle(b0, b1, v, self.r, out);
                }
                if other.r > 0.0 {
                    for &w in &other.verts {
                        circle_circle(v, self.r, w, other.r, out);
                    }
                }
            }
        }
    }
}

fn closest_on_segment(p: DVec2, a: DVec2, b: DVec2) -> DVec2 {
    let ab = b - a;
    let len2 = ab.length_squared();
    let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    a + ab * t
}

fn segment_segment(a0: DVec2, a1: DVec2, b0: DVec2, b1: DVec2) -> Option<DVec2> {
    let da = a1 - a0;
    let db = b1 - b0;
    let den = da.perp_dot(db);
    if den.abs() < 1e-15 {
        return None;
    }
    let w = b0 - a0;
    let s = w.perp_dot(db) / den;
    let t = w.perp_dot(da) / den;
    ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t)).then(|| a0 + da * s)
}

fn segment_circle(a: DVec2, b: DVec2, c: DVec2, r: f64, out: &mut Vec<DVec2>) {
    let d = b - a;
    let f = a - c;
    let qa = d.length_squared();
    if qa == 0.0 {
        return;
    }
    let qb = 2.0 * f.dot(d);
    let qc = f.length_squared() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
        if (0.0..=1.0).contains(&t) {
            out.push(a + d * t);
        }
    }
}

fn circle_circle(c0: DVec2, r0: f64, c1: DVec2, r1: f64, out: &mut Vec<DVec2>) {
    let d = c1 - c0;
    let dist = d.length();
    if dist == 0.0 || dist > r0 + r1 || dist < (r0 - r1).abs() {
        return;
    }
    let along = (dist * dist + r0 * r0 - r1 * r1) / (2.0 * dist);
    let h = (r0 * r0 - along * along).max(0.0).sqrt();
    let base = c0 + d * (along / dist);
    let off = d.perp() * (h / dist);
    out.push(base + off);
    out.push(base - off);
}

fn ccw(mut pts: Vec<DVec2>) -> Vec<DVec2> {
    let mut area = 0.0;
    for i in 0..pts.len() {
        area += pts[i].perp_dot(pts[(i + 1) % pts.len()]);
    }
    if area < 0.0 {
        pts.reverse();
    }
    pts
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<DVec2>) -> Vec<DVec2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: DVec2, a: DVec2, b: DVec2| (a - o).perp_dot(b - o);
    let mut lower: Vec<DVec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<DVec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
