//! Per-env skill inventories and the symbolic planning problems they induce.

use kinder_env::{EnvId, ObjectType, SceneState, ROBOT};
use kinder_taskplan::{Atom, Domain, Param, Predicate, Problem, TypeDecl};

use super::predicates::{abstract_state, predicates_for, typed_objects, PredicateDef, TYPE_HIERARCHY};
use super::skills::*;

pub fn skill_registry(env: EnvId) -> Vec<&'static SkillDef> {
    match env {
        EnvId::Motion2D => vec![&MOVE_TO],
        EnvId::Obstruction2D => vec![&PICK_FROM_SURFACE, &PLACE_ON_SURFACE],
        EnvId::ClutteredRetrieval2D => vec![&PICK, &PLACE_IN_REGION, &DISPLACE],
        EnvId::ClutteredStorage2D => vec![&PICK, &PLACE_IN_SHELF],
        EnvId::PushPullHook2D => vec![&PICK_HOOK, &PUSH_BUTTON_WITH_HOOK],
        EnvId::StickButton2D => vec![&PRESS_BUTTON, &PICK_STICK, &PRESS_WITH_STICK],
    }
}

pub fn skill_by_name(env: EnvId, name: &str) -> Option<&'static SkillDef> {
    skill_registry(env).into_iter().find(|s| s.name == name)
}

fn predicate_decl(p: &PredicateDef) -> Predicate {
    let params = p.types.iter().enumerate().map(|(i, t)| Param::new(&format!("?x{i}"), t)).collect();
    Predicate { name: p.name.to_string(), params }
}

pub fn domain_name(env: EnvId) -> String {
    format!("kinder-{}", env.name().to_lowercase())
}

/// The STRIPS domain induced by the skills of `env`.
pub fn domain(env: EnvId) -> Domain {
    let mut d = Domain::new(&domain_name(env));
    d.types = TYPE_HIERARCHY.iter().map(|(n, p)| TypeDecl { name: n.to_string(), parent: p.to_string() }).collect();
    d.predicates = predicates_for(env).iter().map(predicate_decl).collect();
    d.actions = skill_registry(env).iter().map(|s| s.operator()).collect();
    d
}

/// Goal atoms for the state's instance of `env`.
pub fn goal_atoms(env: EnvId, s: &SceneState) -> Vec<Atom> {
    let names = |ty: ObjectType| s.of_type(ty).map(|(n, _)| n.to_string()).collect::<Vec<_>>();
    match env {
        EnvId::Motion2D => vec![Atom::new("in_region", [ROBOT, "target"])],
        EnvId::Obstruction2D => vec![Atom::new("on", ["target_block", "target_surface"])],
        EnvId::ClutteredRetrieval2D => vec![Atom::new("inside", ["target_block", "target_region"])],
        EnvId::ClutteredStorage2D => {
            let mut g: Vec<Atom> =
                names(ObjectType::Block).into_iter().map(|b| Atom::new("inside", [b.as_str(), "shelf"])).collect();
            g.push(Atom::new("hand_empty", [ROBOT]));
            g
        }
        EnvId::PushPullHook2D => vec![Atom::new("covers", ["movable_button", "target_button"])],
        EnvId::StickButton2D => names(ObjectType::Button).into_iter().map(|b| Atom::new("pressed", [b])).collect(),
    }
}

/// Symbolic problem whose initial state is the abstraction of `s`.
pub fn problem(env: EnvId, s: &SceneState, domain: &Domain) -> Problem {
    let mut p = Problem::new(&format!("{}-instance", domain_name(env)), domain);
    p.objects = typed_objects(s).into_iter().map(|(n, t)| (n, t.to_string())).collect();
    p.init = abstract_state(s, &predicates_for(env)).into_iter().collect();
    p.goal = goal_atoms(env, s);
    p
}

/// `(type, parent)` lines describing the type hierarchy.
/// PDDL-style type lines, `child1 child2 - parent`, one per parent.
pub fn type_hierarchy_text() -> String {
    let mut parents: Vec<&str> = Vec::new();
    for (_, p) in TYPE_HIERARCHY {
        if !parents.contains(p) {
            parents.push(p);
        }
    }
    parents
        .iter()
        .map(|p| {
            let kids: Vec<&str> = TYPE_HIERARCHY.iter().filter(|(_, q)| q == p).map(|(t, _)| *t).collect();
            format!("{} - {p}", kids.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}
