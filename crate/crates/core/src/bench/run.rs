//! Episode runner and the baseline × variant × seed × episode matrix.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::Arc;

use kinder_env::{ActionDelta, Env, SceneState, VariantSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clock::{ClockKind, Stopwatch};
use super::noise::NoisyEnv;
use super::BenchError;
use crate::baselines::{
    bilevel_solve, in_context_examples, llm_solve, mpc_act, zero_control_points, BilevelConfig, HttpTransport,
    LlmConfig, MpcConfig, PromptMode, Transport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Baseline {
    #[serde(rename = "bp")]
    Bp,
    #[serde(rename = "mpc")]
    Mpc,
    #[serde(rename = "llm")]
    Llm,
    #[serde(rename = "llm-con")]
    LlmCon,
}

impl Baseline {
    pub const ALL: [Baseline; 4] = [Baseline::Bp, Baseline::Mpc, Baseline::Llm, Baseline::LlmCon];

    pub fn id(self) -> &'static str {
        match self {
            Baseline::Bp => "bp",
            Baseline::Mpc => "mpc",
            Baseline::Llm => "llm",
            Baseline::LlmCon => "llm-con",
        }
    }

    /// Column heading used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Baseline::Bp => "BP",
            Baseline::Mpc => "MPC",
            Baseline::Llm => "LLMPlan",
            Baseline::LlmCon => "LLMCon",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Baseline {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Baseline::ALL.into_iter().find(|b| b.id() == s).ok_or_else(|| BenchError::UnknownBaseline(s.to_owned()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub baseline: Baseline,
    pub variant: VariantSpec,
    pub num_seeds: usize,
    pub episodes_per_seed: usize,
    pub max_steps: usize,
    pub obs_sigma: f64,
    pub act_sigma: f64,
    pub base_seed: u64,
}

impl RunSpec {
    pub fn new(baseline: Baseline, variant: VariantSpec) -> Self {
        Self {
            baseline,
            variant,
            num_seeds: 5,
            episodes_per_seed: 50,
            max_steps: 500,
            obs_sigma: 0.0,
            act_sigma: 0.0,
            base_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.num_seeds == 0 || self.episodes_per_seed == 0 || self.max_steps == 0 {
            return Err(BenchError::InvalidSpec("counts must be positive".into()));
        }
        if !(self.obs_sigma >= 0.0 && self.act_sigma >= 0.0) {
            return Err(BenchError::InvalidSpec("noise sigmas must be non-negative".into()));
        }
        Ok(())
    }
}

/// Why an episode did not succeed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Succeeded.
    #[default]
    #[serde(rename = "")]
    None,
    /// The planner returned no plan.
    NoPlan,
    /// An open-loop plan ran out before the goal held.
    PlanExhausted,
    /// The step limit was reached.
    Timeout,
    /// The planner panicked or its transport failed.
    Error,
}

impl FailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureKind::None => "",
            FailureKind::NoPlan => "no_plan",
            FailureKind::PlanExhausted => "plan_exhausted",
            FailureKind::Timeout => "timeout",
            FailureKind::Error => "error",
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub baseline: Baseline,
    pub variant: String,
    pub seed: usize,
    pub episode: usize,
    pub success: bool,
    pub steps: usize,
    pub reward: f64,
    pub inf_time_s: f64,
    pub failure_kind: FailureKind,
}

/// Full per-episode log line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    #[serde(flatten)]
    pub result: EpisodeResult,
    pub episode_seed: u64,
    pub obs_sigma: f64,
    pub act_sigma: f64,
    pub max_steps: usize,
    pub planned_actions: Option<usize>,
    pub detail: Option<String>,
}

/// FNV-1a over the little-endian bytes of each word.
pub fn fnv64(words: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

pub fn episode_seed(base_seed: u64, seed_index: usize, episode_index: usize) -> u64 {
    fnv64(&[base_seed, seed_index as u64, episode_index as u64])
}

pub type TransportFactory = Arc<dyn Fn(&RunSpec) -> Result<Box<dyn Transport>, String> + Send + Sync>;

/// Live HTTP endpoint configured from the environment.
pub fn env_transport_factory() -> TransportFactory {
    Arc::new(|_| {
        HttpTransport::from_env()
            .map(|t| Box::new(t) as Box<dyn Transport>)
            .ok_or_else(|| format!("{} is not set", crate::baselines::URL_VAR))
    })
}

#[derive(Clone)]
pub struct MatrixOptions {
    pub workers: usize,
    pub clock: ClockKind,
    pub bilevel: BilevelConfig,
    pub mpc: MpcConfig,
    pub llm: LlmConfig,
    pub transport: TransportFactory,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            clock: ClockKind::Wall,
            bilevel: BilevelConfig::default(),
            mpc: MpcConfig::default(),
            llm: LlmConfig::default(),
            transport: env_transport_factory(),
        }
    }
}

enum PlanOutcome {
    Plan(Vec<ActionDelta>),
    NoPlan(Option<String>),
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

/// Runs one episode; planner failures are recorded, never propagated.
pub fn run_episode(spec: &RunSpec, seed_index: usize, episode_index: usize, opts: &MatrixOptions) -> EpisodeRecord {
    let ep_seed = episode_seed(spec.base_seed, seed_index, episode_index);
    let mut rec = EpisodeRecord {
        result: EpisodeResult {
            baseline: spec.baseline,
            variant: spec.variant.to_string(),
            seed: seed_index,
            episode: episode_index,
            success: false,
            steps: 0,
            reward: 0.0,
            inf_time_s: 0.0,
            failure_kind: FailureKind::Error,
        },
        episode_seed: ep_seed,
        obs_sigma: spec.obs_sigma,
        act_sigma: spec.act_sigma,
        max_steps: spec.max_steps,
        planned_actions: None,
        detail: None,
    };
    let env = match Env::new(spec.variant, ep_seed) {
        Ok(e) => e,
        Err(e) => {
            rec.detail = Some(e.to_string());
            return rec;
        }
    };
    let mut world = NoisyEnv::new(env, spec.obs_sigma, spec.act_sigma, fnv64(&[ep_seed, 1]));
    let planner_seed = fnv64(&[ep_seed, 2]);
    let clock = opts.clock.make();
    let mut sw = Stopwatch::new(&*clock);
    let (steps, kind) = match spec.baseline {
        Baseline::Mpc => run_mpc(spec, &mut world, &mut sw, opts, planner_seed, &mut rec.detail),
        b => {
            let obs = world.observe();
            let planned = match b {
                Baseline::Bp => plan_bp(spec, &obs, ep_seed, planner_seed, &mut sw, opts),
                _ => plan_llm(spec, &obs, ep_seed, planner_seed, &mut sw, opts, b == Baseline::LlmCon),
            };
            match planned {
                Ok(PlanOutcome::Plan(actions)) => {
                    rec.planned_actions = Some(actions.len());
                    execute_open_loop(&mut world, &actions, spec.max_steps)
                }
                Ok(PlanOutcome::NoPlan(why)) => {
                    rec.detail = why;
                    (0, FailureKind::NoPlan)
                }
                Err(why) => {
                    rec.detail = Some(why);
                    (0, FailureKind::Error)
                }
            }
        }
    };
    let r = &mut rec.result;
    r.steps = steps;
    r.reward = -(steps as f64);
    r.success = kind == FailureKind::None;
    r.failure_kind = kind;
    r.inf_time_s = sw.total().as_secs_f64();
    rec
}

fn execute_open_loop(world: &mut NoisyEnv, actions: &[ActionDelta], max_steps: usize) -> (usize, FailureKind) {
    if world.is_solved() {
        return (0, FailureKind::None);
    }
    for (t, a) in actions.iter().enumerate() {
        if t == max_steps {
            return (t, FailureKind::Timeout);
        }
        if world.step(*a).terminated {
            return (t + 1, FailureKind::None);
        }
    }
    let n = actions.len().min(max_steps);
    (n, if n == max_steps { FailureKind::Timeout } else { FailureKind::PlanExhausted })
}

fn plan_bp(
    spec: &RunSpec,
    obs: &SceneState,
    ep_seed: u64,
    seed: u64,
    sw: &mut Stopwatch,
    opts: &MatrixOptions,
) -> Result<PlanOutcome, String> {
    let belief = Env::from_state(spec.variant, ep_seed, obs.clone());
    let res = sw.time(|| catch_unwind(AssertUnwindSafe(|| bilevel_solve(&belief, obs, &opts.bilevel, seed))));
    match res {
        Ok(r) => Ok(match r.actions {
            Some(a) => PlanOutcome::Plan(a),
            None => PlanOutcome::NoPlan(r.stats.timed_out.then(|| "deadline reached".to_string())),
        }),
        Err(p) => Err(panic_text(p)),
    }
}

fn plan_llm(
    spec: &RunSpec,
    obs: &SceneState,
    ep_seed: u64,
    seed: u64,
    sw: &mut Stopwatch,
    opts: &MatrixOptions,
    in_context: bool,
) -> Result<PlanOutcome, String> {
    let mut transport = (opts.transport)(spec)?;
    let belief = Env::from_state(spec.variant, ep_seed, obs.clone());
    let mode =
        if in_context { PromptMode::InContext(in_context_examples(spec.variant.env)) } else { PromptMode::ZeroShot };
    let res =
        sw.time(|| catch_unwind(AssertUnwindSafe(|| llm_solve(&belief, obs, &mut *transport, &mode, &opts.llm, seed))));
    match res {
        Ok(Ok(out)) => Ok(match out.actions {
            Some(a) => PlanOutcome::Plan(a),
            None => PlanOutcome::NoPlan(out.failure),
        }),
        Ok(Err(e)) => Err(e.to_string()),
        Err(p) => Err(panic_text(p)),
    }
}

fn run_mpc(
    spec: &RunSpec,
    world: &mut NoisyEnv,
    sw: &mut Stopwatch,
    opts: &MatrixOptions,
    seed: u64,
    detail: &mut Option<String>,
) -> (usize, FailureKind) {
    use rand::SeedableRng;
    if world.is_solved() {
        return (0, FailureKind::None);
    }
    let cfg = opts.mpc;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut warm = zero_control_points(&cfg);
    let mut sigma = cfg.noise_sigma;
    let mut obs = world.observe();
    let id = spec.variant.env;
    let robot = *world.env.spec();
    for t in 0..spec.max_steps {
        let res =
            sw.time(|| catch_unwind(AssertUnwindSafe(|| mpc_act(id, &robot, &obs, &cfg, &warm, sigma, &mut rng))));
        let step = match res {
            Ok(s) => s,
            Err(p) => {
                *detail = Some(panic_text(p));
                return (t, FailureKind::Error);
            }
        };
        warm = step.warm;
        sigma = step.sigma;
        let out = world.step(step.action);
        if out.terminated {
            return (t + 1, FailureKind::None);
        }
        obs = out.state;
    }
    (spec.max_steps, FailureKind::Timeout)
}

/// Every episode of every spec, in (spec, seed, episode) order regardless of worker count.
pub fn run_matrix(specs: &[RunSpec], opts: &MatrixOptions) -> Result<Vec<EpisodeRecord>, BenchError> {
    for s in specs {
        s.validate()?;
    }
    let jobs: Vec<(&RunSpec, usize, usize)> = specs
        .iter()
        .flat_map(|s| (0..s.num_seeds).flat_map(move |i| (0..s.episodes_per_seed).map(move |e| (s, i, e))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
    Ok(pool.install(|| jobs.par_iter().map(|(s, i, e)| run_episode(s, *i, *e, opts)).collect()))
}
