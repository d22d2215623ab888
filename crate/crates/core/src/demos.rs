//! Demonstration files: recording, replay verification, and planner-generated datasets.
//!
//! A `*.kd-demo.jsonl` file holds a header line, one `[u0, u1, u2, u3, u4]`
//! line per step, and a trailer line with the terminal success flag.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use kinder_env::{ActionDelta, Env, EnvError, SceneState, VariantSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{bilevel_solve, BilevelConfig};
use crate::bench::episode_seed;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEMO_EXT: &str = "kd-demo.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoSource {
    Teleop,
    Planner,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoHeader {
    pub schema_version: u32,
    pub env: String,
    pub variant: String,
    pub reset_seed: u64,
    pub source: DemoSource,
    pub created_at: String,
}

impl DemoHeader {
    pub fn new(variant: VariantSpec, reset_seed: u64, source: DemoSource) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            env: variant.env.name().to_string(),
            variant: variant.to_string(),
            reset_seed,
            source,
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DemoRecord {
    pub header: DemoHeader,
    /// Post-clamp, pre-noise actions.
    pub steps: Vec<ActionDelta>,
    pub terminal_success: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header(DemoHeader),
    Trailer { terminal_success: bool, num_steps: usize },
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unsupported demo schema version {0}")]
    UnknownSchema(u32),
    #[error("verification mismatch: stored success {stored}, replay gives {replayed} after {steps} steps")]
    VerificationMismatch { stored: bool, replayed: bool, steps: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header env `{env}` does not match variant `{variant}`")]
    EnvMismatch { env: String, variant: String },
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayOutcome {
    pub final_state: SceneState,
    pub success: bool,
}

impl DemoRecord {
    pub fn variant(&self) -> Result<VariantSpec, DemoError> {
        let v: VariantSpec = self.header.variant.parse()?;
        if v.env.name() != self.header.env {
            return Err(DemoError::EnvMismatch { env: self.header.env.clone(), variant: self.header.variant.clone() });
        }
        Ok(v)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&Line::Header(self.header.clone())).expect("header serializes");
        out.push('\n');
        for a in &self.steps {
            out.push_str(&serde_json::to_string(&a.0).expect("action serializes"));
            out.push('\n');
        }
        let trailer = Line::Trailer { terminal_success: self.terminal_success, num_steps: self.steps.len() };
        out.push_str(&serde_json::to_string(&trailer).expect("trailer serializes"));
        out.push('\n');
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, DemoError> {
        let err = |line: usize, message: String| DemoError::Parse { line, message };
        let lines: Vec<&str> = text.lines().collect();
        let (first, rest) = lines.split_first().ok_or_else(|| err(1, "empty demo".into()))?;
        let header = match serde_json::from_str::<Line>(first) {
            Ok(Line::Header(h)) => h,
            Ok(_) => return Err(err(1, "first line is not a header".into())),
            Err(e) => {
                let v: serde_json::Value = serde_json::from_str(first).map_err(|e| err(1, e.to_string()))?;
                match v.get("schema_version").and_then(|s| s.as_u64()) {
                    Some(n) if n != u64::from(SCHEMA_VERSION) => return Err(DemoError::UnknownSchema(n as u32)),
                    _ => return Err(err(1, e.to_string())),
                }
            }
        };
        if header.schema_version != SCHEMA_VERSION {
            return Err(DemoError::UnknownSchema(header.schema_version));
        }
        let (last, body) = rest.split_last().ok_or_else(|| err(2, "missing trailer".into()))?;
        let mut steps = Vec::with_capacity(body.len());
        for (i, l) in body.iter().enumerate() {
            let u: [f64; 5] = serde_json::from_str(l).map_err(|e| err(i + 2, e.to_string()))?;
            steps.push(ActionDelta(u));
        }
        let n = lines.len();
        match serde_json::from_str::<Line>(last) {
            Ok(Line::Trailer { terminal_success, num_steps }) => {
                if num_steps != steps.len() {
                    return Err(err(n, format!("trailer counts {num_steps} steps, file has {}", steps.len())));
                }
                Ok(Self { header, steps, terminal_success })
            }
            _ => Err(err(n, "last line is not a trailer".into())),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, DemoError> {
        Self::from_jsonl(&std::fs::read_to_string(path)?)
    }

    /// Writes via a temporary file in the same directory, then renames.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), DemoError> {
        let path = path.as_ref();
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_jsonl().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Conventional file name: `<variant>_<seed as hex>.kd-demo.jsonl`.
    pub fn file_name(&self) -> String {
        format!("{}_{:016x}.{DEMO_EXT}", self.header.variant, self.header.reset_seed)
    }
}

/// Resets `variant` with `seed` and steps `policy` until the goal holds,
/// the policy stops, or `max_steps` actions have been taken.
pub fn record(
    variant: VariantSpec,
    seed: u64,
    source: DemoSource,
    max_steps: usize,
    mut policy: impl FnMut(&SceneState) -> Option<ActionDelta>,
) -> Result<DemoRecord, DemoError> {
    let mut env = Env::new(variant, seed)?;
    let mut steps = Vec::new();
    while !env.is_solved() && steps.len() < max_steps {
        let Some(a) = policy(env.state()) else { break };
        let a = a.clamped();
        steps.push(a);
        env.step(a);
    }
    Ok(DemoRecord { header: DemoHeader::new(variant, seed, source), steps, terminal_success: env.is_solved() })
}

/// Re-executes the stored actions from reset; the stored flag must match.
pub fn replay(demo: &DemoRecord) -> Result<ReplayOutcome, DemoError> {
    if demo.header.schema_version != SCHEMA_VERSION {
        return Err(DemoError::UnknownSchema(demo.header.schema_version));
    }
    let mut env = Env::new(demo.variant()?, demo.header.reset_seed)?;
    for a in &demo.steps {
        env.step(*a);
    }
    let success = env.is_solved();
    if success != demo.terminal_success {
        return Err(DemoError::VerificationMismatch {
            stored: demo.terminal_success,
            replayed: success,
            steps: demo.steps.len(),
        });
    }
    Ok(ReplayOutcome { final_state: env.state().clone(), success })
}

pub fn verify_file(path: impl AsRef<Path>) -> Result<ReplayOutcome, DemoError> {
    replay(&DemoRecord::read(path)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DatasetStats {
    pub attempts: usize,
    pub successes: usize,
}

/// Open-loop planner: given a freshly reset env, an action sequence or nothing.
pub type Planner<'a> = dyn Fn(&Env, u64) -> Option<Vec<ActionDelta>> + Sync + 'a;

pub fn bp_planner(cfg: BilevelConfig) -> impl Fn(&Env, u64) -> Option<Vec<ActionDelta>> + Sync {
    move |env, seed| bilevel_solve(env, env.state(), &cfg, seed).actions
}

/// Runs `planner` on `n` seeded episodes; successful rollouts become planner demos.
pub fn generate_dataset(
    planner: &Planner,
    variant: VariantSpec,
    n: usize,
    base_seed: u64,
    max_steps: usize,
) -> Result<(Vec<DemoRecord>, DatasetStats), DemoError> {
    let attempts: Vec<Result<Option<DemoRecord>, DemoError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let seed = episode_seed(base_seed, 0, i);
            let env = Env::new(variant, seed)?;
            let Some(actions) = planner(&env, seed) else { return Ok(None) };
            let mut it = actions.into_iter();
            let demo = record(variant, seed, DemoSource::Planner, max_steps, |_| it.next())?;
            Ok(demo.terminal_success.then_some(demo))
        })
        .collect();
    let mut demos = Vec::new();
    for a in attempts {
        if let Some(d) = a? {
            demos.push(d);
        }
    }
    let stats = DatasetStats { attempts: n, successes: demos.len() };
    Ok((demos, stats))
}

/// Writes each demo under `dir` with its conventional file name.
pub fn write_dataset(dir: impl AsRef<Path>, demos: &[DemoRecord]) -> Result<Vec<PathBuf>, DemoError> {
    std::fs::create_dir_all(dir.as_ref())?;
    demos
        .iter()
        .map(|d| {
            let p = dir.as_ref().join(d.file_name());
            d.write(&p)?;
            Ok(p)
        })
        .collect()
}
