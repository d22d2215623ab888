//! STRIPS-subset task planning.
//!
//! Domains and problems are written in a small s-expression format (`.kd-pddl`),
//! grounded into integer-indexed operators, and searched with greedy best-first
//! search guided by the FF relaxed-plan heuristic.

mod error;
mod ground;
mod hff;
mod model;
mod parse;
mod search;
mod write;

pub use error::{ModelError, ParseError};
pub use ground::{ground, GroundOp, GroundProblem};
pub use hff::{hff, Hff};
pub use model::{Atom, Domain, OperatorSchema, Param, Predicate, Problem, TypeDecl, OBJECT_TYPE};
pub use parse::{parse_domain, parse_problem};
pub use search::{gbfs_plans, spawn_plans, AbstractPlan, PlanStream, SearchStats};

pub use fixedbitset::FixedBitSet;
