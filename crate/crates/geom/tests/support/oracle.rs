//! Brute-force reference geometry for the property tests.
//!
//! Nothing here calls into the library's narrow phase. Shapes are
//! flattened independently and tested by sampling a regular grid of pitch
//! `p`. Each grid row intersects a convex part in one closed x-interval, so
//! every grid point of the row is classified without visiting it.

#![allow(dead_code)]

use kinder_geom::{PlacedShape, Pose2, Shape2, Vec2};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// Within the boundary band; the sampler cannot decide.
    Unsure,
}

#[derive(Clone, Copy, Debug)]
pub enum OPart {
    Disk { c: Vec2, r: f64 },
    Box { c: Vec2, th: f64, hx: f64, hy: f64 },
}

pub fn flatten(s: &PlacedShape) -> Vec<OPart> {
    let mut out = Vec::new();
    walk(&s.shape, s.pose.x, s.pose.y, s.pose.theta, &mut out);
    out
}

fn walk(shape: &Shape2, x: f64, y: f64, th: f64, out: &mut Vec<OPart>) {
    match shape {
        Shape2::Circle { radius } => out.push(OPart::Disk { c: Vec2::new(x, y), r: *radius }),
        Shape2::Rect { half_w, half_h } => out.push(OPart::Box { c: Vec2::new(x, y), th, hx: *half_w, hy: *half_h }),
        Shape2::Compound { parts } => {
            for (s, l) in parts {
                let (sn, cs) = th.sin_cos();
                let wx = x + cs * l.x - sn * l.y;
                let wy = y + sn * l.x + cs * l.y;
                walk(s, wx, wy, th + l.theta, out);
            }
        }
    }
}

/// Grows (`d > 0`) or shrinks (`d < 0`) every part; `None` when it vanishes.
fn offset(p: &OPart, d: f64) -> Option<OPart> {
    match *p {
        OPart::Disk { c, r } => (r + d > 0.0).then_some(OPart::Disk { c, r: r + d }),
        OPart::Box { c, th, hx, hy } => {
            (hx + d > 0.0 && hy + d > 0.0).then_some(OPart::Box { c, th, hx: hx + d, hy: hy + d })
        }
    }
}

fn offset_all(ps: &[OPart], d: f64) -> Vec<OPart> {
    ps.iter().filter_map(|p| offset(p, d)).collect()
}

fn bounds(ps: &[OPart]) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in ps {
        let (x0, y0, x1, y1) = match *p {
            OPart::Disk { c, r } => (c.x - r, c.y - r, c.x + r, c.y + r),
            OPart::Box { c, th, hx, hy } => {
                let ex = (th.cos() * hx).abs() + (th.sin() * hy).abs();
                let ey = (th.sin() * hx).abs() + (th.cos() * hy).abs();
                (c.x - ex, c.y - ey, c.x + ex, c.y + ey)
            }
        };
        b = (b.0.min(x0), b.1.min(y0), b.2.max(x1), b.3.max(y1));
    }
    b
}

/// `lo ≤ a·t + k ≤ hi`, solved for `t`.
fn slab(a: f64, k: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if a.abs() < 1e-15 {
        return (lo <= k && k <= hi).then_some((f64::NEG_INFINITY, f64::INFINITY));
    }
    let t0 = (lo - k) / a;
    let t1 = (hi - k) / a;
    Some((t0.min(t1), t0.max(t1)))
}

fn row_interval(p: &OPart, y: f64) -> Option<(f64, f64)> {
    match *p {
        OPart::Disk { c, r } => {
            let dy = y - c.y;
            let q = r * r - dy * dy;
            (q >= 0.0).then(|| (c.x - q.sqrt(), c.x + q.sqrt()))
        }
        OPart::Box { c, th, hx, hy } => {
            let (s, co) = th.sin_cos();
            let dy = y - c.y;
            // local x = dx·cos + dy·sin ; local y = -dx·sin + dy·cos
            let (a0, a1) = slab(co, dy * s, -hx, hx)?;
            let (b0, b1) = slab(-s, dy * co, -hy, hy)?;
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            (lo <= hi).then_some((c.x + lo, c.x + hi))
        }
    }
}

fn row_set(ps: &[OPart], y: f64) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = ps.iter().filter_map(|p| row_interval(p, y)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in v {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn grid_range(lo: f64, hi: f64, p: f64) -> Option<(i64, i64)> {
    let a = (lo / p).ceil() as i64;
    let b = (hi / p).floor() as i64;
    (a <= b).then_some((a, b))
}

/// Is there a grid point lying in both part sets?
fn any_common_point(a: &[OPart], b: &[OPart], p: f64) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let ba = bounds(a);
    let bb = bounds(b);
    let (y0, y1) = (ba.1.max(bb.1), ba.3.min(bb.3));
    let Some((j0, j1)) = grid_range(y0, y1, p) else { return false };
    for j in j0..=j1 {
        let y = j as f64 * p;
        let ra = row_set(a, y);
        let rb = row_set(b, y);
        for &(l0, h0) in &ra {
            for &(l1, h1) in &rb {
                if grid_range(l0.max(l1), h0.min(h1), p).is_some() {
                    return true;
                }
            }
        }
    }
    false
}

/// Is there a grid point of `inner` that `outer` misses?
fn any_point_outside(inner: &[OPart], outer: &[OPart], p: f64) -> bool {
    if inner.is_empty() {
        return false;
    }
    let bi = bounds(inner);
    let Some((j0, j1)) = grid_range(bi.1, bi.3, p) else { return false };
    for j in j0..=j1 {
        let y = j as f64 * p;
        let ro = row_set(outer, y);
        for (lo, hi) in row_set(inner, y) {
            let Some((mut k, kb)) = grid_range(lo, hi, p) else { continue };
            while k <= kb {
                let x = k as f64 * p;
                match ro.iter().find(|(a, b)| *a <= x && x <= *b) {
                    None => return true,
                    Some(&(_, b)) => k = (b / p).floor() as i64 + 1,
                }
            }
        }
    }
    false
}

pub fn sample_collides(a: &PlacedShape, b: &PlacedShape, pitch: f64) -> Verdict {
    let (fa, fb) = (flatten(a), flatten(b));
    let band = 2.0 * pitch;
    if any_common_point(&offset_all(&fa, -band), &offset_all(&fb, -band), pitch) {
        Verdict::Yes
    } else if !any_common_point(&offset_all(&fa, band), &offset_all(&fb, band), pitch) {
        Verdict::No
    } else {
        Verdict::Unsure
    }
}

pub fn sample_contains(outer: &PlacedShape, inner: &PlacedShape, pitch: f64) -> Verdict {
    let (fo, fi) = (flatten(outer), flatten(inner));
    let band = 2.0 * pitch;
    if !any_point_outside(&offset_all(&fi, band), &offset_all(&fo, -band), pitch) {
        Verdict::Yes
    } else if any_point_outside(&offset_all(&fi, -band), &offset_all(&fo, band), pitch) {
        Verdict::No
    } else {
        Verdict::Unsure
    }
}

/// Largest feature size of a pair, used to scale the grid pitch.
pub fn scale(a: &PlacedShape, b: &PlacedShape) -> f64 {
    let f = |s: &PlacedShape| {
        let (x0, y0, x1, y1) = bounds(&flatten(s));
        (x1 - x0).max(y1 - y0)
    };
    f(a).max(f(b))
}

// ---------------------------------------------------------------------------
// Translation-space oracle: polygonized parts, hull-based Minkowski
// differences, and a dense sweep of ray directions.

fn polygon(p: &OPart, segs: usize) -> Vec<Vec2> {
    match *p {
        OPart::Disk { c, r } => (0..segs)
            .map(|i| {
                let a = i as f64 / segs as f64 * std::f64::consts::TAU;
                c + Vec2::new(a.cos(), a.sin()) * r
            })
            .collect(),
        OPart::Box { c, th, hx, hy } => {
            let (s, co) = th.sin_cos();
            [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)]
                .iter()
                .map(|&(x, y)| c + Vec2::new(co * x - s * y, s * x + co * y))
                .collect()
        }
    }
}

/// Gift-wrapping hull, counter-clockwise.
fn jarvis(pts: &[Vec2]) -> Vec<Vec2> {
    let start = pts.iter().copied().min_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))).unwrap();
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = pts[0];
        for &q in pts {
            if next == cur {
                next = q;
                continue;
            }
            let cr = (next - cur).perp_dot(q - cur);
            if cr < 0.0 || (cr == 0.0 && (q - cur).length() > (next - cur).length()) {
                next = q;
            }
        }
        if next == start || hull.len() > pts.len() {
            break;
        }
        hull.push(next);
        cur = next;
    }
    hull
}

/// Open interval of ray parameters `s` with `s·d` strictly inside the polygon.
fn ray_interval(poly: &[Vec2], d: Vec2) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let n = Vec2::new(b.y - a.y, a.x - b.x);
        // inside: n·(s d - a) < 0
        let den = n.dot(d);
        let num = n.dot(a);
        if den.abs() < 1e-300 {
            if num <= 0.0 {
                return None;
            }
        } else if den > 0.0 {
            hi = hi.min(num / den);
        } else {
            lo = lo.max(num / den);
        }
    }
    (lo < hi).then_some((lo, hi))
}

fn first_free(sets: &[Vec<Vec2>], d: Vec2) -> f64 {
    let ivs: Vec<(f64, f64)> = sets.iter().filter_map(|p| ray_interval(p, d)).collect();
    let mut s = 0.0;
    loop {
        match ivs.iter().find(|(a, b)| *a < s && s < *b) {
            Some(&(_, b)) => s = b,
            None => return s,
        }
    }
}

/// Length of the shortest separating translation of `b`, by direction sweep.
pub fn sweep_min_translation(a: &PlacedShape, b: &PlacedShape, circle_segs: usize, dirs: usize) -> f64 {
    let pa: Vec<Vec<Vec2>> = flatten(a).iter().map(|p| polygon(p, circle_segs)).collect();
    let pb: Vec<Vec<Vec2>> = flatten(b).iter().map(|p| polygon(p, circle_segs)).collect();
    let mut sets = Vec::new();
    for x in &pa {
        for y in &pb {
            let pts: Vec<Vec2> = x.iter().flat_map(|p| y.iter().map(move |q| *p - *q)).collect();
            sets.push(jarvis(&pts));
        }
    }
    let step = std::f64::consts::TAU / dirs as f64;
    let at = |ang: f64| first_free(&sets, Vec2::new(ang.cos(), ang.sin()));
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..dirs {
        let ang = i as f64 * step;
        let s = at(ang);
        if s < best.0 {
            best = (s, ang);
        }
    }
    // Refine around the coarse winner.
    let mut fine = best.0;
    for k in -200..=200 {
        fine = fine.min(at(best.1 + k as f64 * step / 100.0));
    }
    fine
}

// ---------------------------------------------------------------------------
// Random shapes.

pub fn random_shape<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Shape2 {
    match rng.random_range(0..3) {
        0 => Shape2::circle(rng.random_range(lo..hi)),
        1 => Shape2::rect(rng.random_range(lo..hi), rng.random_range(lo..hi)),
        _ => {
            let long = rng.random_range(lo.max(0.2)..hi.max(0.3));
            let thick = rng.random_range(lo.min(0.05)..(lo + 0.1));
            let short = rng.random_range(lo..hi);
            Shape2::compound(vec![
                (Shape2::rect(long, thick), Pose2::new(0.0, 0.0, 0.0)),
                (Shape2::rect(thick, short), Pose2::new(long - thick, short - thick, 0.0)),
            ])
        }
    }
}

pub fn random_convex<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Shape2 {
    if rng.random_bool(0.5) {
        Shape2::circle(rng.random_range(lo..hi))
    } else {
        Shape2::rect(rng.random_range(lo..hi), rng.random_range(lo..hi))
    }
}

pub fn random_pose<R: Rng>(rng: &mut R, spread: f64) -> Pose2 {
    Pose2::new(rng.random_range(-spread..spread), rng.random_range(-spread..spread), rng.random_range(-3.2..3.2))
}

pub fn random_pair<R: Rng>(rng: &mut R) -> (PlacedShape, PlacedShape) {
    let a = PlacedShape::new(random_shape(rng, 0.05, 1.0), random_pose(rng, 1.0));
    let b = PlacedShape::new(random_shape(rng, 0.05, 1.0), random_pose(rng, 1.0));
    (a, b)
}
