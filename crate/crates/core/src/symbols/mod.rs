//! The concept and skill layer: predicates over scene states, skills as
//! options with STRIPS operators, and the motion planner options follow.

mod motion;
mod option;
mod predicates;
mod registry;
mod skills;

pub use motion::{plan_motion, plan_motion_with, steps_between, Checker, ConfigGoal, MotionPlan, MOTION_BUDGET};
pub use option::{execute_option, ExecConfig, Phase, Script, SkillError, Trajectory, OPTION_STEP_CAP};
pub use predicates::{
    abstract_state, is_subtype, predicates_for, symbolic_type, typed_objects, Classifier, PredicateDef, ADJACENT,
    COVERS, HAND_EMPTY, HOLDING, INSIDE, IN_REGION, ON, PRESSED, REACHABLE, TYPE_HIERARCHY,
};
pub use registry::{domain, domain_name, goal_atoms, problem, skill_by_name, skill_registry, type_hierarchy_text};
pub use skills::SkillDef;
