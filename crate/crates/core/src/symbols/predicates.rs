//! Relational predicates grounded by geometric classifiers.

use std::collections::BTreeSet;

use kinder_env::schema::{button, rect};
use kinder_env::suite::{direct_reach, rests_on, ON_TOL};
use kinder_env::{EnvId, ObjectState, ObjectType, RobotDims, SceneState};
use kinder_geom::{contains, distance};
use kinder_taskplan::Atom;

/// Pure test of a fixed-arity relation over named objects.
pub type Classifier = fn(&SceneState, &[&str]) -> bool;

#[derive(Clone, Copy)]
pub struct PredicateDef {
    pub name: &'static str,
    pub types: &'static [&'static str],
    pub classifier: Classifier,
}

impl std::fmt::Debug for PredicateDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:?}", self.name, self.types)
    }
}

/// `(type, parent)` pairs below `object`, parents first.
pub const TYPE_HIERARCHY: &[(&str, &str)] = &[
    ("robot", "object"),
    ("region", "object"),
    ("surface", "object"),
    ("button", "object"),
    ("movable", "object"),
    ("block", "movable"),
    ("stick", "movable"),
    ("hook", "movable"),
];

/// Symbolic type of a scene object; walls and tables have none.
pub fn symbolic_type(o: &ObjectState) -> Option<&'static str> {
    match o.ty {
        ObjectType::Robot => Some("robot"),
        ObjectType::Region => Some("region"),
        ObjectType::Surface => Some("surface"),
        ObjectType::Block => Some("block"),
        ObjectType::Stick => Some("stick"),
        ObjectType::Hook => Some("hook"),
        ObjectType::Button => Some("button"),
        ObjectType::Wall | ObjectType::Table => None,
    }
}

/// Whether `ty` equals `ancestor` or descends from it.
pub fn is_subtype(ty: &str, ancestor: &str) -> bool {
    let mut cur = ty;
    loop {
        if cur == ancestor {
            return true;
        }
        match TYPE_HIERARCHY.iter().find(|(t, _)| *t == cur) {
            Some((_, p)) => cur = p,
            None => return false,
        }
    }
}

/// Symbolic objects of a state with their types, in state order.
pub fn typed_objects(s: &SceneState) -> Vec<(String, &'static str)> {
    s.objects.iter().filter_map(|(n, o)| symbolic_type(o).map(|t| (n.to_string(), t))).collect()
}

fn hand_empty(s: &SceneState, _: &[&str]) -> bool {
    s.held.is_empty()
}

fn holding(s: &SceneState, a: &[&str]) -> bool {
    s.is_held(a[1])
}

fn in_region(s: &SceneState, a: &[&str]) -> bool {
    let r = s.obj(a[1]).placed().aabb();
    let p = s.robot().pose();
    p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y
}

fn x_span(o: &ObjectState) -> (f64, f64) {
    let b = o.placed().aabb();
    (b.min.x, b.max.x)
}

/// Resting on the top edge of `surface` (within `ON_TOL`) and overlapping it horizontally.
fn rests_over(s: &SceneState, block: &str, surface: &str) -> bool {
    let (b, f) = (s.obj(block).placed().aabb(), s.obj(surface).placed().aabb());
    let gap = b.min.y - f.max.y;
    (-1e-9..=ON_TOL).contains(&gap) && b.max.x > f.min.x && b.min.x < f.max.x
}

/// Side-view support. A block over several surfaces is on the one it is
/// fully within, else on the smallest one it overlaps.
fn on(s: &SceneState, a: &[&str]) -> bool {
    let (b, surf) = (a[0], a[1]);
    if s.is_held(b) || !rests_over(s, b, surf) {
        return false;
    }
    let mut supports: Vec<(&str, f64, bool)> = s
        .of_type(ObjectType::Surface)
        .filter(|(n, _)| rests_over(s, b, n))
        .map(|(n, o)| {
            let (lo, hi) = x_span(o);
            (&**n, hi - lo, rests_on(s, b, n))
        })
        .collect();
    supports.sort_by(|x, y| y.2.cmp(&x.2).then(x.1.total_cmp(&y.1)));
    supports.first().is_some_and(|(n, _, _)| *n == surf)
}

fn inside(s: &SceneState, a: &[&str]) -> bool {
    !s.is_held(a[0]) && contains(&s.obj(a[1]).placed(), &s.obj(a[0]).placed())
}

/// Distance under which an obstruction counts as boxing a block in.
pub const ADJACENT_DIST: f64 = 0.1;

fn adjacent(s: &SceneState, a: &[&str]) -> bool {
    a[0] != a[1]
        && !s.is_held(a[0])
        && !s.is_held(a[1])
        && distance(&s.obj(a[0]).placed(), &s.obj(a[1]).placed()) <= ADJACENT_DIST
}

fn pressed(s: &SceneState, a: &[&str]) -> bool {
    s.obj(a[0]).features[button::PRESSED] > 0.5
}

/// Margin kept below the direct reach limit when pressing by hand.
pub const REACH_MARGIN: f64 = 0.03;

fn reachable(s: &SceneState, a: &[&str]) -> bool {
    let b = &s.obj(a[0]).features;
    b[button::Y] - b[button::RADIUS] <= direct_reach(&RobotDims::from_state(s)) - REACH_MARGIN
}

fn covers(s: &SceneState, a: &[&str]) -> bool {
    let (m, t) = (&s.obj(a[0]).features, &s.obj(a[1]).features);
    a[0] != a[1]
        && m[button::MOVABLE] > 0.5
        && (m[button::X] - t[button::X]).hypot(m[button::Y] - t[button::Y]) <= t[button::RADIUS]
}

pub const HAND_EMPTY: PredicateDef = PredicateDef { name: "hand_empty", types: &["robot"], classifier: hand_empty };
pub const HOLDING: PredicateDef = PredicateDef { name: "holding", types: &["robot", "movable"], classifier: holding };
pub const IN_REGION: PredicateDef =
    PredicateDef { name: "in_region", types: &["robot", "region"], classifier: in_region };
pub const ON: PredicateDef = PredicateDef { name: "on", types: &["block", "surface"], classifier: on };
pub const INSIDE: PredicateDef = PredicateDef { name: "inside", types: &["block", "region"], classifier: inside };
pub const ADJACENT: PredicateDef = PredicateDef { name: "adjacent", types: &["block", "block"], classifier: adjacent };
pub const PRESSED: PredicateDef = PredicateDef { name: "pressed", types: &["button"], classifier: pressed };
pub const REACHABLE: PredicateDef = PredicateDef { name: "reachable", types: &["button"], classifier: reachable };
pub const COVERS: PredicateDef = PredicateDef { name: "covers", types: &["button", "button"], classifier: covers };

/// Predicates used by the skills of `env`.
pub fn predicates_for(env: EnvId) -> Vec<PredicateDef> {
    match env {
        EnvId::Motion2D => vec![IN_REGION],
        EnvId::Obstruction2D => vec![HAND_EMPTY, HOLDING, ON],
        EnvId::ClutteredRetrieval2D => vec![HAND_EMPTY, HOLDING, INSIDE, ADJACENT],
        EnvId::ClutteredStorage2D => vec![HAND_EMPTY, HOLDING, INSIDE],
        EnvId::PushPullHook2D => vec![HAND_EMPTY, HOLDING, COVERS],
        EnvId::StickButton2D => vec![HAND_EMPTY, HOLDING, PRESSED, REACHABLE],
    }
}

/// Every ground atom whose classifier holds, over all well-typed argument tuples.
pub fn abstract_state(s: &SceneState, preds: &[PredicateDef]) -> BTreeSet<Atom> {
    let objs = typed_objects(s);
    let mut out = BTreeSet::new();
    for p in preds {
        let domains: Vec<Vec<&str>> = p
            .types
            .iter()
            .map(|t| objs.iter().filter(|(_, ot)| is_subtype(ot, t)).map(|(n, _)| n.as_str()).collect())
            .collect();
        if domains.iter().any(|d| d.is_empty()) {
            continue;
        }
        let mut args = Vec::with_capacity(domains.len());
        collect_tuples(s, p, &domains, &mut args, &mut out);
    }
    out
}

fn collect_tuples<'a>(
    s: &SceneState,
    p: &PredicateDef,
    domains: &[Vec<&'a str>],
    args: &mut Vec<&'a str>,
    out: &mut BTreeSet<Atom>,
) {
    if args.len() == domains.len() {
        if (p.classifier)(s, args) {
            out.insert(Atom::new(p.name, args.iter().copied()));
        }
        return;
    }
    for o in &domains[args.len()] {
        args.push(o);
        collect_tuples(s, p, domains, args, out);
        args.pop();
    }
}

/// Rect half extents, used by skills on block-like objects.
pub fn halves(o: &ObjectState) -> (f64, f64) {
    (o.features[rect::HALF_W], o.features[rect::HALF_H])
}
