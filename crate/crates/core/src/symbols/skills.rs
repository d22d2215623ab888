//! Parameterized skills: samplers, option scripts, and STRIPS operators.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use kinder_env::grasp::{face_approach, perimeter_point};
use kinder_env::schema::button;
use kinder_env::suite::{GRASP_MARGIN, ON_TOL, STICK_HALF_LEN, TABLE_Y};
use kinder_env::{ObjectType, RobotConfig, RobotDims, RobotSpec, SceneState, ROBOT, WORLD};
use kinder_geom::{collides, wrap_angle, Aabb, PlacedShape, Pose2, Shape2, Vec2, DEFAULT_TOL};
use kinder_taskplan::{Atom, OperatorSchema, Param};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::motion::{plan_motion_with, Checker, ConfigGoal, MotionPlan, MOTION_BUDGET};
use super::option::{Phase, Script, SkillError};
use super::predicates::{halves, is_subtype, symbolic_type, ADJACENT, COVERS, INSIDE, IN_REGION, ON, PRESSED};

pub type Sampler = fn(&SceneState, &[&str], &mut ChaCha8Rng) -> Vec<f64>;
pub type Initiate = fn(&SceneState, &[&str], &[f64], u64) -> Option<Script>;
pub type Terminal = fn(&SceneState, &[&str]) -> bool;
type AtomTemplate = (&'static str, &'static [&'static str]);

/// A skill: typed object parameters, a box of continuous parameters, an
/// option, a sampler, and the operator describing its symbolic effects.
/// Operators take the robot as an implicit first parameter `?robot`.
pub struct SkillDef {
    pub name: &'static str,
    pub op_name: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub lo: &'static [f64],
    pub hi: &'static [f64],
    pub pre: &'static [AtomTemplate],
    pub add: &'static [AtomTemplate],
    pub del: &'static [AtomTemplate],
    pub sampler: Sampler,
    initiate: Initiate,
    terminal: Terminal,
}

impl std::fmt::Debug for SkillDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl SkillDef {
    pub fn num_params(&self) -> usize {
        self.lo.len()
    }

    pub fn operator(&self) -> OperatorSchema {
        let atoms = |ts: &[AtomTemplate]| ts.iter().map(|(p, a)| Atom::new(p, a.iter().copied())).collect::<Vec<_>>();
        let mut params = vec![Param::new("?robot", "robot")];
        params.extend(self.params.iter().map(|(n, t)| Param::new(n, t)));
        OperatorSchema {
            name: self.op_name.to_string(),
            params,
            pre: atoms(self.pre),
            add: atoms(self.add),
            del: atoms(self.del),
        }
    }

    pub fn sample(&self, s: &SceneState, objects: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
        (self.sampler)(s, objects, rng)
    }

    pub fn check_args(&self, s: &SceneState, objects: &[&str], params: &[f64]) -> Result<(), SkillError> {
        if objects.len() != self.params.len() || params.len() != self.lo.len() {
            return Err(SkillError::BadArguments {
                skill: self.name.to_string(),
                expected: self.params.len(),
                params: self.lo.len(),
                got_objects: objects.len(),
                got_params: params.len(),
            });
        }
        for (o, (_, ty)) in objects.iter().zip(self.params) {
            let ok = s.get(o).and_then(symbolic_type).is_some_and(|t| is_subtype(t, ty));
            if !ok {
                return Err(SkillError::UnknownObject { skill: self.name.to_string(), object: o.to_string() });
            }
        }
        Ok(())
    }

    /// Starts the option, or `None` when it is not initiable here.
    pub fn initiate(&self, s: &SceneState, objects: &[&str], params: &[f64], seed: u64) -> Option<Script> {
        let clamped: Vec<f64> =
            params.iter().zip(self.lo.iter().zip(self.hi)).map(|(v, (l, h))| v.clamp(*l, *h)).collect();
        (self.initiate)(s, objects, &clamped, seed)
    }

    pub fn initiable(&self, s: &SceneState, objects: &[&str], params: &[f64]) -> bool {
        self.check_args(s, objects, params).is_ok() && self.initiate(s, objects, params, 0).is_some()
    }

    pub fn terminal(&self, s: &SceneState, objects: &[&str]) -> bool {
        (self.terminal)(s, objects)
    }

    /// Controller description in the `ParameterizedController` listing style.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let args: Vec<String> = self.params.iter().map(|(n, t)| format!("{}:{t}", n.trim_start_matches('?'))).collect();
        let types: Vec<&str> = self.params.iter().map(|(_, t)| *t).collect();
        let _ =
            writeln!(out, "{}({}): ParameterizedController(types=[{}])", self.name, args.join(", "), types.join(", "));
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ");
        let _ =
            write!(out, "    params_space=Box([{}], [{}], ({},), float32)", fmt(self.lo), fmt(self.hi), self.lo.len());
        out
    }
}

fn dims(s: &SceneState) -> RobotDims {
    RobotDims::from_state(s)
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..=1.0)
}

/// Ext values tried, shortest first, when a target allows several.
fn ext_candidates(d: &RobotDims) -> impl Iterator<Item = f64> + '_ {
    (0..=8).map(move |k| d.arm_min + (d.arm_max - d.arm_min) * k as f64 / 8.0)
}

fn plan_exact(chk: &Checker, cfg: RobotConfig, seed: u64) -> Option<MotionPlan> {
    plan_motion_with(chk, &ConfigGoal::Exact(cfg), seed, MOTION_BUDGET)
}

/// Robot configuration whose vacuum pad frame is `vac`.
fn config_for_vac(vac: &Pose2, ext: f64, d: &RobotDims) -> RobotConfig {
    let base = vac.translation() - vac.heading() * (ext + d.vacuum_half_h);
    RobotConfig::new(base.x, base.y, vac.theta, ext)
}

/// Pose of `obj` relative to the vacuum pad.
fn held_rel(s: &SceneState, obj: &str) -> Pose2 {
    let cfg = RobotConfig::from_state(s);
    dims(s).vacuum_pose(&cfg).inverse().compose(&s.obj(obj).pose())
}

fn inflated(p: &PlacedShape, m: f64) -> Shape2 {
    let b = p.aabb();
    Shape2::rect((b.max.x - b.min.x) / 2.0 + m, (b.max.y - b.min.y) / 2.0 + m)
}

fn aabb_center(b: &Aabb) -> Vec2 {
    (b.min + b.max) / 2.0
}

/// Whether a shape would overlap any unheld graspable object other than `skip`.
fn overlaps_movables(s: &SceneState, shape: &PlacedShape, skip: &str, margin: f64) -> bool {
    let grown = PlacedShape::new(inflated(shape, margin), Pose2::from_translation(aabb_center(&shape.aabb())));
    s.objects
        .iter()
        .filter(|(n, o)| &***n != skip && o.ty.is_graspable() && !s.is_held(n))
        .any(|(_, o)| collides(&grown, &o.placed(), DEFAULT_TOL))
}

// ---- MoveTo --------------------------------------------------------------

fn move_to_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n: Normal<f64> = Normal::new(0.0, 0.3).expect("valid sigma");
    vec![n.sample(rng).clamp(-PI, PI)]
}

fn move_to_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let r = s.obj(o[0]).placed().aabb();
    let cur = RobotConfig::from_state(s);
    let mx = (0.1f64).min((r.max.x - r.min.x) * 0.2);
    let my = (0.1f64).min((r.max.y - r.min.y) * 0.2);
    let (x0, x1, y0, y1) = (r.min.x + mx, r.max.x - mx, r.min.y + my, r.max.y - my);
    let theta = wrap_angle(cur.pose.theta + p[0]);
    let nearest = RobotConfig::new(cur.pose.x.clamp(x0, x1), cur.pose.y.clamp(y0, y1), theta, cur.ext);
    let first = std::sync::atomic::AtomicBool::new(true);
    let goal = ConfigGoal::Region {
        contains: Box::new(move |c: &RobotConfig| {
            c.pose.x >= r.min.x && c.pose.x <= r.max.x && c.pose.y >= r.min.y && c.pose.y <= r.max.y
        }),
        sample: Box::new(move |rng: &mut ChaCha8Rng| {
            if first.swap(false, std::sync::atomic::Ordering::Relaxed) {
                nearest
            } else {
                RobotConfig::new(rng.random_range(x0..=x1), rng.random_range(y0..=y1), theta, cur.ext)
            }
        }),
    };
    let plan = plan_motion_with(&Checker::new(s), &goal, seed, MOTION_BUDGET)?;
    Some(Script::new(vec![Phase::follow(plan)], seed))
}

fn move_to_term(s: &SceneState, o: &[&str]) -> bool {
    (IN_REGION.classifier)(s, &[ROBOT, o[0]])
}

// ---- Pick ----------------------------------------------------------------

/// Grasp configs for perimeter parameter `t`, trying increasing arm extensions.
fn grasp_configs(s: &SceneState, obj: &str, face: usize, along: f64) -> Vec<RobotConfig> {
    let d = dims(s);
    let o = s.obj(obj);
    let (hw, hh) = halves(o);
    let half_len = if face.is_multiple_of(2) { hh } else { hw };
    let along = along * (1.0 - d.vacuum_half_w / half_len).max(0.0);
    ext_candidates(&d).map(|ext| face_approach(&d, &o.pose(), hw, hh, face, along, ext)).collect()
}

fn pick_script(s: &SceneState, cands: Vec<RobotConfig>, seed: u64) -> Option<Script> {
    if !s.held.is_empty() {
        return None;
    }
    let chk = Checker::new(s);
    let goal = cands.into_iter().find(|c| !chk.collides(c))?;
    let plan = plan_exact(&chk, goal, seed)?;
    Some(Script::new(vec![Phase::follow(plan), Phase::Vacuum(true)], seed))
}

fn pick_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let (hw, hh) = halves(s.obj(o[0]));
    let (face, along) = perimeter_point(p[0], hw, hh);
    pick_script(s, grasp_configs(s, o[0], face, along), seed)
}

/// Side view: grasp along the top face only.
fn pick_top_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    pick_script(s, grasp_configs(s, o[0], 1, 2.0 * p[0] - 1.0), seed)
}

fn unit_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    vec![unit(rng)]
}

fn holding_term(s: &SceneState, o: &[&str]) -> bool {
    s.is_held(o[0])
}

// ---- Place -----------------------------------------------------------------

/// Script that carries `obj` to world pose `target` and releases it.
fn carry_to(s: &SceneState, obj: &str, target: Pose2, seed: u64) -> Option<Script> {
    let plan = carry_plan(s, obj, target, seed)?;
    Some(Script::new(vec![Phase::follow(plan), Phase::Vacuum(false)], seed))
}

fn carry_plan(s: &SceneState, obj: &str, target: Pose2, seed: u64) -> Option<MotionPlan> {
    if !s.is_held(obj) {
        return None;
    }
    let d = dims(s);
    let vac = target.compose(&held_rel(s, obj).inverse());
    let chk = Checker::new(s);
    let goal = ext_candidates(&d).map(|e| config_for_vac(&vac, e, &d)).find(|c| !chk.collides(c))?;
    plan_exact(&chk, goal, seed)
}

/// World AABB of `obj` if its pose became `p`.
fn aabb_at(s: &SceneState, obj: &str, p: Pose2) -> Aabb {
    PlacedShape::new(s.obj(obj).shape(), p).aabb()
}

fn place_surface_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let (obj, surf) = (o[0], o[1]);
    if !s.is_held(obj) {
        return None;
    }
    let cur = s.obj(obj).pose();
    let b = aabb_at(s, obj, cur);
    let (bw, bh) = ((b.max.x - b.min.x) / 2.0, (b.max.y - b.min.y) / 2.0);
    let f = s.obj(surf).placed().aabb();
    let (lo, hi) = (f.min.x + bw + 0.01, f.max.x - bw - 0.01);
    let cx = if lo <= hi { lo + p[0] * (hi - lo) } else { (f.min.x + f.max.x) / 2.0 };
    let cy = f.max.y + bh + 0.5 * ON_TOL;
    let off = cur.translation() - aabb_center(&b);
    let target = Pose2::new(cx + off.x, cy + off.y, cur.theta);
    let placed = PlacedShape::new(s.obj(obj).shape(), target);
    if overlaps_movables(s, &placed, obj, 0.05) {
        return None;
    }
    // The block must end up supported by `surf` and no smaller surface.
    let foot = placed.aabb();
    let other = s.of_type(ObjectType::Surface).any(|(n, o2)| {
        let a = o2.placed().aabb();
        &**n != surf
            && a.max.x - a.min.x < f.max.x - f.min.x
            && foot.max.x > a.min.x - 0.02
            && foot.min.x < a.max.x + 0.02
    });
    if other {
        return None;
    }
    carry_to(s, obj, target, seed)
}

fn place_surface_term(s: &SceneState, o: &[&str]) -> bool {
    (ON.classifier)(s, o) && s.held.is_empty()
}

/// Block pose for fractions `(u, v)` of the free span of `region`, given the block's heading.
fn region_target(s: &SceneState, obj: &str, region: &str, u: f64, v: f64, theta: f64) -> Option<Pose2> {
    let probe = Pose2::new(0.0, 0.0, theta);
    let b = aabb_at(s, obj, probe);
    let r = s.obj(region).placed().aabb();
    let m = 0.03;
    let (x0, x1) = (r.min.x - b.min.x + m, r.max.x - b.max.x - m);
    let (y0, y1) = (r.min.y - b.min.y + m, r.max.y - b.max.y - m);
    if x0 > x1 || y0 > y1 {
        return None;
    }
    let t = Pose2::new(x0 + u * (x1 - x0), y0 + v * (y1 - y0), theta);
    let placed = PlacedShape::new(s.obj(obj).shape(), t);
    (!overlaps_movables(s, &placed, obj, 0.04)).then_some(t)
}

fn place_region_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    if !s.is_held(o[0]) {
        return None;
    }
    let theta = s.obj(o[0]).pose().theta;
    let target = region_target(s, o[0], o[1], p[0], p[1], theta)?;
    carry_to(s, o[0], target, seed)
}

/// Shelf placement: the pad enters from below, so the arm points up.
fn place_shelf_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    if !s.is_held(o[0]) {
        return None;
    }
    let rel = held_rel(s, o[0]);
    let theta = wrap_angle(FRAC_PI_2 + rel.theta);
    let target = region_target(s, o[0], o[1], p[0], p[1], theta)?;
    carry_to(s, o[0], target, seed)
}

fn pair_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    vec![unit(rng), unit(rng)]
}

fn inside_term(s: &SceneState, o: &[&str]) -> bool {
    (INSIDE.classifier)(s, o) && s.held.is_empty()
}

// ---- Displace ----------------------------------------------------------------

fn displace_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    vec![unit(rng), unit(rng), unit(rng)]
}

fn displace_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let (obj, target) = (o[0].to_string(), o[1].to_string());
    let (hw, hh) = halves(s.obj(&obj));
    let (face, along) = perimeter_point(p[0], hw, hh);
    let (x, y) = (0.6 + p[1] * (WORLD.0 - 1.2), 0.6 + p[2] * (WORLD.1 - 1.2));
    let dest = Pose2::new(x, y, s.obj(&obj).pose().theta);
    let placed = PlacedShape::new(s.obj(&obj).shape(), dest);
    let t = s.obj(&target).pose().translation();
    if (dest.translation() - t).length() < 1.0 || overlaps_movables(s, &placed, &obj, 0.1) {
        return None;
    }
    let regions_hit = s.of_type(ObjectType::Region).any(|(_, r)| {
        r.placed().aabb().max.x - r.placed().aabb().min.x < WORLD.0 - 1e-6 && collides(&r.placed(), &placed, 0.0)
    });
    if regions_hit {
        return None;
    }
    let mut script = pick_script(s, grasp_configs(s, &obj, face, along), seed)?;
    let carried = obj.clone();
    script.extend(vec![
        Phase::Plan(Box::new(move |st: &SceneState, sd| {
            let drop = Pose2::new(x, y, st.obj(&carried).pose().theta);
            carry_plan(st, &carried, drop, sd)
        })),
        Phase::Vacuum(false),
    ]);
    Some(script)
}

fn displace_term(s: &SceneState, o: &[&str]) -> bool {
    s.held.is_empty() && !(ADJACENT.classifier)(s, o)
}

// ---- StickButton2D -------------------------------------------------------------

/// Highest base y that keeps the base off the table.
fn base_y_limit(d: &RobotDims) -> f64 {
    TABLE_Y - d.base_radius - 0.005
}

fn button_xyr(s: &SceneState, b: &str) -> (f64, f64, f64) {
    let f = &s.obj(b).features;
    (f[button::X], f[button::Y], f[button::RADIUS])
}

fn empty_sample(_: &SceneState, _: &[&str], _: &mut ChaCha8Rng) -> Vec<f64> {
    Vec::new()
}

fn press_button_init(s: &SceneState, o: &[&str], _: &[f64], seed: u64) -> Option<Script> {
    if !s.held.is_empty() {
        return None;
    }
    let d = dims(s);
    let (bx, by, r) = button_xyr(s, o[0]);
    let y = (by - r - 0.02 - 2.0 * d.vacuum_half_h - d.arm_min).min(base_y_limit(&d));
    let goal = RobotConfig::new(bx, y, FRAC_PI_2, d.arm_min);
    let chk = Checker::new(s);
    let plan = plan_exact(&chk, goal, seed)?;
    let b = o[0].to_string();
    let steps = ((d.arm_max - d.arm_min) / RobotSpec::default().max_deltas[3]).ceil() as usize + 2;
    Some(Script::new(
        vec![Phase::follow(plan), Phase::push([0.0, 0.0, 0.0, 1.0], move |st| (PRESSED.classifier)(st, &[&b]), steps)],
        seed,
    ))
}

fn pressed_term(s: &SceneState, o: &[&str]) -> bool {
    (PRESSED.classifier)(s, &o[o.len() - 1..])
}

/// Grasp faces ordered so the pad approaches from below.
fn lower_face(s: &SceneState, obj: &str) -> usize {
    let theta = s.obj(obj).pose().theta;
    if (theta + FRAC_PI_2).sin() >= 0.0 {
        3
    } else {
        1
    }
}

fn pick_stick_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    if rng.random_bool(0.8) {
        let t = rng.random_range(0.0..=0.1);
        vec![if rng.random_bool(0.5) { t } else { 1.0 - t }]
    } else {
        vec![unit(rng)]
    }
}

fn pick_stick_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let face = lower_face(s, o[0]);
    let (hw, _) = halves(s.obj(o[0]));
    let along = (2.0 * p[0] - 1.0) * (hw - GRASP_MARGIN) / hw;
    let d = dims(s);
    let o0 = s.obj(o[0]);
    let (hw, hh) = halves(o0);
    let sign = if face == 3 { 1.0 } else { -1.0 };
    let cands = ext_candidates(&d).map(|e| face_approach(&d, &o0.pose(), hw, hh, face, sign * along, e)).collect();
    pick_script(s, cands, seed)
}

/// Base offset of a held bar's end centers when the robot has heading `h` and extension `ext`.
fn held_bar_ends(s: &SceneState, obj: &str, half_len: f64, h: f64, ext: f64) -> [Vec2; 2] {
    let d = dims(s);
    let cfg = RobotConfig::new(0.0, 0.0, h, ext);
    let pose = d.vacuum_pose(&cfg).compose(&held_rel(s, obj));
    [pose.apply(Vec2::new(half_len, 0.0)), pose.apply(Vec2::new(-half_len, 0.0))]
}

/// The bar end that is highest for heading `h`, as `(end, heading)`; tries `h` and `h + π`.
fn upright_end(s: &SceneState, obj: &str, half_len: f64, tilt: f64, ext: f64) -> (Vec2, f64) {
    [tilt, wrap_angle(tilt + PI)]
        .into_iter()
        .map(|h| {
            let top = held_bar_ends(s, obj, half_len, h, ext)
                .into_iter()
                .max_by(|a, b| a.y.total_cmp(&b.y))
                .expect("two ends");
            (top, h)
        })
        .max_by(|a, b| a.0.y.total_cmp(&b.0.y))
        .expect("two headings")
}

fn tilt_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n: Normal<f64> = Normal::new(0.0, 0.1).expect("valid sigma");
    vec![n.sample(rng).clamp(-0.3, 0.3)]
}

fn press_with_stick_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let (stick, b) = (o[0], o[1]);
    if !s.is_held(stick) {
        return None;
    }
    let d = dims(s);
    let ext = RobotConfig::from_state(s).ext;
    let (tip, h) = upright_end(s, stick, STICK_HALF_LEN, p[0], ext);
    let (bx, by, r) = button_xyr(s, b);
    let base = Vec2::new(bx - tip.x, by - r - 0.03 - tip.y);
    if base.y > base_y_limit(&d) {
        return None;
    }
    let chk = Checker::new(s);
    let plan = plan_exact(&chk, RobotConfig::new(base.x, base.y, h, ext), seed)?;
    let name = b.to_string();
    Some(Script::new(
        vec![Phase::follow(plan), Phase::push([0.0, 1.0, 0.0, 0.0], move |st| (PRESSED.classifier)(st, &[&name]), 6)],
        seed,
    ))
}

// ---- PushPullHook2D --------------------------------------------------------------

const HOOK_GRASP: (f64, f64) = (0.5, 0.68);

fn hook_push_dir(s: &SceneState) -> f64 {
    let m = s.objects.iter().find(|(_, o)| o.ty == ObjectType::Button && o.features[button::MOVABLE] > 0.5);
    let t = s.objects.iter().find(|(_, o)| o.ty == ObjectType::Button && o.features[button::MOVABLE] < 0.5);
    match (m, t) {
        (Some((_, m)), Some((_, t))) if t.features[button::X] < m.features[button::X] => -1.0,
        _ => 1.0,
    }
}

fn pick_hook_sample(s: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let t = rng.random_range(0.0..0.5);
    vec![if hook_push_dir(s) > 0.0 { t } else { 0.5 + t }]
}

fn pick_hook_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let d = dims(s);
    let h = s.obj(o[0]);
    let pose = h.pose();
    let long = h.features[kinder_env::schema::hook::LONG_HALF];
    let thick = h.features[kinder_env::schema::hook::THICK_HALF];
    let (face, t) = if p[0] < 0.5 { (3, p[0] * 2.0) } else { (1, (p[0] - 0.5) * 2.0) };
    let a = HOOK_GRASP.0 + t.min(1.0) * (HOOK_GRASP.1 - HOOK_GRASP.0);
    let along = if face == 3 { a } else { -a };
    let cands = ext_candidates(&d).map(|e| face_approach(&d, &pose, long, thick, face, along, e)).collect();
    pick_script(s, cands, seed)
}

fn push_hook_sample(_: &SceneState, _: &[&str], rng: &mut ChaCha8Rng) -> Vec<f64> {
    vec![unit(rng)]
}

fn push_hook_init(s: &SceneState, o: &[&str], p: &[f64], seed: u64) -> Option<Script> {
    let (hook, m, t) = (o[0], o[1], o[2]);
    if !s.is_held(hook) || s.obj(m).features[button::MOVABLE] < 0.5 {
        return None;
    }
    let d = dims(s);
    let hf = &s.obj(hook).features;
    let (long, thick) = (hf[kinder_env::schema::hook::LONG_HALF], hf[kinder_env::schema::hook::THICK_HALF]);
    let (mx, my, mr) = button_xyr(s, m);
    let (tx, _, _) = button_xyr(s, t);
    let dir = if tx >= mx { 1.0 } else { -1.0 };
    let h = if dir > 0.0 { 0.0 } else { PI };
    let ext = RobotConfig::from_state(s).ext;
    let ends = held_bar_ends(s, hook, long, h, ext);
    let top = ends.into_iter().max_by(|a, b| a.y.total_cmp(&b.y)).expect("two ends");
    let face_x = top.x + dir * thick;
    let top_y = my + 0.05 + 0.25 * p[0];
    let base = Vec2::new(mx - dir * (mr + 0.03) - face_x, top_y - top.y);
    if base.y > base_y_limit(&d) {
        return None;
    }
    let extra = vec![PlacedShape::new(Shape2::circle(mr + 0.02), Pose2::new(mx, my, 0.0))];
    let chk = Checker::new(s).with_extra(extra);
    let plan = plan_exact(&chk, RobotConfig::new(base.x, base.y, h, ext), seed)?;
    let (mn, tn) = (m.to_string(), t.to_string());
    let steps = (((tx - mx).abs() + 0.1) / RobotSpec::default().max_deltas[0]).ceil() as usize + 5;
    let until = move |st: &SceneState| {
        let mx = st.obj(&mn).features[button::X];
        let tx = st.obj(&tn).features[button::X];
        dir * (mx - tx) >= -0.01
    };
    Some(Script::new(vec![Phase::follow(plan), Phase::push([dir, 0.0, 0.0, 0.0], until, steps)], seed))
}

fn covers_term(s: &SceneState, o: &[&str]) -> bool {
    (COVERS.classifier)(s, &o[1..])
}

// ---- Registry ----------------------------------------------------------------------

const HAND_EMPTY_R: AtomTemplate = ("hand_empty", &["?robot"]);

pub static MOVE_TO: SkillDef = SkillDef {
    name: "MoveTo",
    op_name: "move_to",
    params: &[("?target", "region")],
    lo: &[-PI],
    hi: &[PI],
    pre: &[],
    add: &[("in_region", &["?robot", "?target"])],
    del: &[],
    sampler: move_to_sample,
    initiate: move_to_init,
    terminal: move_to_term,
};

pub static PICK_FROM_SURFACE: SkillDef = SkillDef {
    name: "Pick",
    op_name: "pick",
    params: &[("?obj", "block"), ("?surf", "surface")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[HAND_EMPTY_R, ("on", &["?obj", "?surf"])],
    add: &[("holding", &["?robot", "?obj"])],
    del: &[HAND_EMPTY_R, ("on", &["?obj", "?surf"])],
    sampler: unit_sample,
    initiate: pick_top_init,
    terminal: holding_term,
};

pub static PLACE_ON_SURFACE: SkillDef = SkillDef {
    name: "Place",
    op_name: "place",
    params: &[("?obj", "block"), ("?surf", "surface")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[("holding", &["?robot", "?obj"])],
    add: &[HAND_EMPTY_R, ("on", &["?obj", "?surf"])],
    del: &[("holding", &["?robot", "?obj"])],
    sampler: unit_sample,
    initiate: place_surface_init,
    terminal: place_surface_term,
};

pub static PICK: SkillDef = SkillDef {
    name: "Pick",
    op_name: "pick",
    params: &[("?obj", "block")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[HAND_EMPTY_R],
    add: &[("holding", &["?robot", "?obj"])],
    del: &[HAND_EMPTY_R],
    sampler: unit_sample,
    initiate: pick_init,
    terminal: holding_term,
};

pub static PLACE_IN_REGION: SkillDef = SkillDef {
    name: "Place",
    op_name: "place",
    params: &[("?obj", "block"), ("?dest", "region")],
    lo: &[0.0, 0.0],
    hi: &[1.0, 1.0],
    pre: &[("holding", &["?robot", "?obj"])],
    add: &[HAND_EMPTY_R, ("inside", &["?obj", "?dest"])],
    del: &[("holding", &["?robot", "?obj"])],
    sampler: pair_sample,
    initiate: place_region_init,
    terminal: inside_term,
};

pub static PLACE_IN_SHELF: SkillDef = SkillDef {
    name: "Place",
    op_name: "place",
    params: &[("?obj", "block"), ("?dest", "region")],
    lo: &[0.0, 0.0],
    hi: &[1.0, 1.0],
    pre: &[("holding", &["?robot", "?obj"])],
    add: &[HAND_EMPTY_R, ("inside", &["?obj", "?dest"])],
    del: &[("holding", &["?robot", "?obj"])],
    sampler: pair_sample,
    initiate: place_shelf_init,
    terminal: inside_term,
};

pub static DISPLACE: SkillDef = SkillDef {
    name: "Displace",
    op_name: "displace",
    params: &[("?obj", "block"), ("?from", "block")],
    lo: &[0.0, 0.0, 0.0],
    hi: &[1.0, 1.0, 1.0],
    pre: &[HAND_EMPTY_R, ("adjacent", &["?obj", "?from"])],
    add: &[],
    del: &[("adjacent", &["?obj", "?from"])],
    sampler: displace_sample,
    initiate: displace_init,
    terminal: displace_term,
};

pub static PRESS_BUTTON: SkillDef = SkillDef {
    name: "PressButton",
    op_name: "press_button",
    params: &[("?button", "button")],
    lo: &[],
    hi: &[],
    pre: &[HAND_EMPTY_R, ("reachable", &["?button"])],
    add: &[("pressed", &["?button"])],
    del: &[],
    sampler: empty_sample,
    initiate: press_button_init,
    terminal: pressed_term,
};

pub static PICK_STICK: SkillDef = SkillDef {
    name: "PickStick",
    op_name: "pick_stick",
    params: &[("?stick", "stick")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[HAND_EMPTY_R],
    add: &[("holding", &["?robot", "?stick"])],
    del: &[HAND_EMPTY_R],
    sampler: pick_stick_sample,
    initiate: pick_stick_init,
    terminal: holding_term,
};

pub static PRESS_WITH_STICK: SkillDef = SkillDef {
    name: "PressWithStick",
    op_name: "press_with_stick",
    params: &[("?stick", "stick"), ("?button", "button")],
    lo: &[-0.3],
    hi: &[0.3],
    pre: &[("holding", &["?robot", "?stick"])],
    add: &[("pressed", &["?button"])],
    del: &[],
    sampler: tilt_sample,
    initiate: press_with_stick_init,
    terminal: pressed_term,
};

pub static PICK_HOOK: SkillDef = SkillDef {
    name: "PickHook",
    op_name: "pick_hook",
    params: &[("?hook", "hook")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[HAND_EMPTY_R],
    add: &[("holding", &["?robot", "?hook"])],
    del: &[HAND_EMPTY_R],
    sampler: pick_hook_sample,
    initiate: pick_hook_init,
    terminal: holding_term,
};

pub static PUSH_BUTTON_WITH_HOOK: SkillDef = SkillDef {
    name: "PushButtonWithHook",
    op_name: "push_button_with_hook",
    params: &[("?hook", "hook"), ("?button", "button"), ("?target", "button")],
    lo: &[0.0],
    hi: &[1.0],
    pre: &[("holding", &["?robot", "?hook"])],
    add: &[("covers", &["?button", "?target"])],
    del: &[],
    sampler: push_hook_sample,
    initiate: push_hook_init,
    terminal: covers_term,
};
