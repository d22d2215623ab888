//! Symbolic layer, planner baselines, benchmark harness, and demonstrations
//! for the kinder 2D environments.

pub mod baselines;
pub mod bench;
pub mod demos;
pub mod symbols;
