//! Search-then-sample bilevel planning.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use kinder_env::{ActionDelta, Env, SceneState};
use kinder_taskplan::{gbfs_plans, ground, AbstractPlan, Atom, GroundProblem};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::symbols::{
    abstract_state, domain, execute_option, predicates_for, problem, skill_registry, ExecConfig, SkillDef,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilevelConfig {
    pub max_abstract_plans: usize,
    /// Wall-clock budget for the whole solve.
    pub abstract_deadline: Duration,
    pub samples_per_step: usize,
    pub option_step_cap: usize,
}

impl Default for BilevelConfig {
    fn default() -> Self {
        Self {
            max_abstract_plans: 10,
            abstract_deadline: Duration::from_secs(60),
            samples_per_step: 3,
            option_step_cap: crate::symbols::OPTION_STEP_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BilevelStats {
    pub abstract_plans: usize,
    pub options_simulated: usize,
    /// Most samples drawn for any single plan step.
    pub max_samples_at_step: usize,
    pub search_time: Duration,
    pub total_time: Duration,
    pub timed_out: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BilevelResult {
    pub actions: Option<Vec<ActionDelta>>,
    pub stats: BilevelStats,
}

struct Refiner<'a> {
    env: Env,
    g: &'a GroundProblem,
    skills: Vec<&'static SkillDef>,
    cfg: &'a BilevelConfig,
    rng: ChaCha8Rng,
    deadline: Instant,
    stats: BilevelStats,
}

impl Refiner<'_> {
    fn refine(&mut self, state: &SceneState, plan: &AbstractPlan, i: usize) -> Option<Vec<ActionDelta>> {
        if i == plan.ops.len() {
            return self.env.goal().holds(state).then(Vec::new);
        }
        let op = &self.g.ops[plan.ops[i] as usize];
        let skill = self.skills[op.schema];
        let objects: Vec<&str> = op.args[1..].iter().map(|a| &**a).collect();
        let add: Vec<&Atom> = op.add.iter().map(|a| self.g.atom(*a)).collect();
        let del: Vec<&Atom> = op.del.iter().map(|a| self.g.atom(*a)).collect();
        let preds = predicates_for(self.env.variant().env);
        let mut drawn = 0;
        for _ in 0..self.cfg.samples_per_step {
            if Instant::now() >= self.deadline {
                self.stats.timed_out = true;
                return None;
            }
            drawn += 1;
            self.stats.max_samples_at_step = self.stats.max_samples_at_step.max(drawn);
            let params = skill.sample(state, &objects, &mut self.rng);
            let exec = ExecConfig { max_steps: self.cfg.option_step_cap, seed: self.rng.next_u64() };
            self.env.set_state(state.clone());
            self.stats.options_simulated += 1;
            let Ok(traj) = execute_option(&mut self.env, skill, &objects, &params, &exec) else { continue };
            if !traj.success {
                continue;
            }
            let end = traj.states.last().expect("start state recorded").clone();
            let abs: BTreeSet<Atom> = abstract_state(&end, &preds);
            if !add.iter().all(|a| abs.contains(*a)) || del.iter().any(|a| abs.contains(*a)) {
                continue;
            }
            if let Some(rest) = self.refine(&end, plan, i + 1) {
                let mut out = traj.actions;
                out.extend(rest);
                return Some(out);
            }
            if self.stats.timed_out {
                return None;
            }
        }
        None
    }
}

/// Plans abstractly over the state's abstraction, then refines each
/// abstract plan by backtracking over sampled skill parameters.
pub fn bilevel_solve(env: &Env, state: &SceneState, cfg: &BilevelConfig, seed: u64) -> BilevelResult {
    let start = Instant::now();
    let deadline = start + cfg.abstract_deadline;
    let mut result = BilevelResult::default();
    if env.goal().holds(state) {
        result.actions = Some(Vec::new());
        result.stats.total_time = start.elapsed();
        return result;
    }
    let id = env.variant().env;
    let dom = domain(id);
    let prob = problem(id, state, &dom);
    let g = ground(&dom, &prob);
    let mut refiner = Refiner {
        env: Env::from_state(*env.variant(), env.seed(), state.clone()),
        g: &g,
        skills: skill_registry(id),
        cfg,
        rng: ChaCha8Rng::seed_from_u64(seed),
        deadline,
        stats: BilevelStats::default(),
    };
    let mut stream = gbfs_plans(&g, cfg.max_abstract_plans, deadline.saturating_duration_since(Instant::now()));
    let mut search_time = Duration::ZERO;
    loop {
        let t = Instant::now();
        let next = stream.next();
        search_time += t.elapsed();
        let Some(plan) = next else { break };
        refiner.stats.abstract_plans += 1;
        if let Some(actions) = refiner.refine(state, &plan, 0) {
            result.actions = Some(actions);
            break;
        }
        if refiner.stats.timed_out {
            break;
        }
    }
    refiner.stats.timed_out |= stream.stats().timed_out;
    result.stats = refiner.stats;
    result.stats.search_time = search_time;
    result.stats.total_time = start.elapsed();
    result
}
