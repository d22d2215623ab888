//! LLM planner client: prompt rendering, plan parsing, pluggable transports,
//! and open-loop execution of the parsed skill sequence.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use kinder_env::{ActionDelta, Env, SceneState};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbols::{
    abstract_state, goal_atoms, predicates_for, skill_by_name, skill_registry, type_hierarchy_text, typed_objects,
    ExecConfig, SkillDef,
};

/// Zero-shot template.
pub const LLM_PLAN_TEMPLATE: &str = include_str!("../../prompts/llm_plan.txt");
/// In-context template.
pub const LLM_CON_TEMPLATE: &str = include_str!("../../prompts/llm_con.txt");

pub const URL_VAR: &str = "KINDER_LLM_URL";
pub const KEY_VAR: &str = "KINDER_LLM_API_KEY";
pub const MODEL_VAR: &str = "KINDER_LLM_MODEL";

#[derive(Clone, Debug, PartialEq)]
pub enum PromptMode {
    ZeroShot,
    /// Worked examples, embedded verbatim in order.
    InContext(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("template placeholder `{{{0}}}` has no value")]
    MissingPlaceholder(String),
    #[error("in-context mode needs at least one example")]
    NoExamples,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PlanParseError {
    #[error("response has no `Plan:` line")]
    NoPlanBlock,
    #[error("line {line}: {reason}")]
    LineParseError { line: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub skill: String,
    /// `(object name, type name)` pairs as written.
    pub objects: Vec<(String, String)>,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlmPlanRequest {
    pub prompt: String,
    pub model: String,
    pub temperature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlmPlanResponse {
    pub raw: String,
    pub plan: Option<Vec<PlanStep>>,
    pub diagnostics: Vec<PlanParseError>,
}

impl LlmPlanResponse {
    /// Parses `raw` and checks each step against `skills`.
    pub fn from_raw(raw: String, skills: &[&SkillDef]) -> Self {
        match parse_plan(&raw).and_then(|p| validate_plan(&raw, &p, skills).map(|_| p)) {
            Ok(p) => Self { raw, plan: Some(p), diagnostics: Vec::new() },
            Err(e) => Self { raw, plan: None, diagnostics: vec![e] },
        }
    }
}

/// Failure to obtain a completion; carries whatever was exchanged.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("transport error: {message}")]
pub struct TransportError {
    pub message: String,
    pub request: LlmPlanRequest,
    pub raw: Option<String>,
}

impl TransportError {
    pub fn new(message: impl Into<String>, request: &LlmPlanRequest, raw: Option<String>) -> Self {
        Self { message: message.into(), request: request.clone(), raw }
    }
}

/// A chat endpoint returning the raw completion text.
pub trait Transport {
    fn complete(&mut self, req: &LlmPlanRequest) -> Result<String, TransportError>;
}

/// Returns scripted responses in order, logging each request.
#[derive(Debug, Default)]
pub struct StubTransport {
    responses: VecDeque<Result<String, String>>,
    pub requests: Vec<LlmPlanRequest>,
}

impl StubTransport {
    pub fn new<I, S>(responses: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { responses: responses.into_iter().map(|r| Ok(r.into())).collect(), requests: Vec::new() }
    }

    /// Queues a failure.
    pub fn push_error(&mut self, message: impl Into<String>) {
        self.responses.push_back(Err(message.into()));
    }
}

impl Transport for StubTransport {
    fn complete(&mut self, req: &LlmPlanRequest) -> Result<String, TransportError> {
        self.requests.push(req.clone());
        match self.responses.pop_front() {
            Some(Ok(r)) => Ok(r),
            Some(Err(m)) => Err(TransportError::new(m, req, None)),
            None => Err(TransportError::new("stub has no responses left", req, None)),
        }
    }
}

/// One recorded request/response pair; a cassette is a JSONL file of these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub request: LlmPlanRequest,
    pub response: String,
}

#[derive(Debug, Error)]
pub enum CassetteError {
    #[error("cassette io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cassette line {line}: {message}")]
    Json { line: usize, message: String },
}

/// Replays recorded exchanges whose request matches exactly.
#[derive(Clone, Debug, Default)]
pub struct Cassette {
    pub exchanges: Vec<Exchange>,
}

impl Cassette {
    pub fn from_jsonl(text: &str) -> Result<Self, CassetteError> {
        let mut exchanges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let ex =
                serde_json::from_str(line).map_err(|e| CassetteError::Json { line: i + 1, message: e.to_string() })?;
            exchanges.push(ex);
        }
        Ok(Self { exchanges })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CassetteError> {
        Self::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for ex in &self.exchanges {
            out.push_str(&serde_json::to_string(ex).expect("exchange serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CassetteError> {
        Ok(std::fs::write(path, self.to_jsonl())?)
    }
}

impl Transport for Cassette {
    fn complete(&mut self, req: &LlmPlanRequest) -> Result<String, TransportError> {
        self.exchanges
            .iter()
            .find(|ex| ex.request == *req)
            .map(|ex| ex.response.clone())
            .ok_or_else(|| TransportError::new("no recorded exchange matches the request", req, None))
    }
}

/// Forwards to `inner` and records every successful exchange.
pub struct Recorder<T> {
    pub inner: T,
    pub cassette: Cassette,
}

impl<T: Transport> Recorder<T> {
    pub fn new(inner: T) -> Self {
        Self { inner, cassette: Cassette::default() }
    }
}

impl<T: Transport> Transport for Recorder<T> {
    fn complete(&mut self, req: &LlmPlanRequest) -> Result<String, TransportError> {
        let r = self.inner.complete(req)?;
        self.cassette.exchanges.push(Exchange { request: req.clone(), response: r.clone() });
        Ok(r)
    }
}

/// Chat-completion endpoint over HTTP.
#[derive(Clone, Debug)]
pub struct HttpTransport {
    pub url: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
}

impl HttpTransport {
    /// Reads the endpoint URL and key from the environment.
    pub fn from_env() -> Option<Self> {
        let url = std::env::var(URL_VAR).ok()?;
        Some(Self { url, api_key: std::env::var(KEY_VAR).ok(), timeout: Duration::from_secs(120) })
    }
}

impl Transport for HttpTransport {
    fn complete(&mut self, req: &LlmPlanRequest) -> Result<String, TransportError> {
        let body = serde_json::json!({
            "model": req.model,
            "messages": [{ "role": "user", "content": req.prompt }],
            "temperature": req.temperature,
        });
        let agent = ureq::AgentBuilder::new().timeout(self.timeout).build();
        let mut call = agent.post(&self.url).set("Content-Type", "application/json");
        if let Some(k) = &self.api_key {
            call = call.set("Authorization", &format!("Bearer {k}"));
        }
        let resp = match call.send_string(&body.to_string()) {
            Ok(r) => r,
            Err(ureq::Error::Status(code, r)) => {
                let raw = r.into_string().ok();
                return Err(TransportError::new(format!("http status {code}"), req, raw));
            }
            Err(e) => return Err(TransportError::new(e.to_string(), req, None)),
        };
        let raw = resp.into_string().map_err(|e| TransportError::new(e.to_string(), req, None))?;
        let v: serde_json::Value =
            serde_json::from_str(&raw).map_err(|e| TransportError::new(e.to_string(), req, Some(raw.clone())))?;
        v["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| TransportError::new("response has no choices[0].message.content", req, Some(raw)))
    }
}

/// Fills `{name}` placeholders in one pass; substituted text is not rescanned.
pub fn render_template(template: &str, fields: &[(&str, &str)]) -> Result<String, PromptError> {
    let mut out = String::with_capacity(template.len() * 2);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) if is_ident(&after[..close]) => {
                let key = &after[..close];
                let val = fields
                    .iter()
                    .find(|(k, _)| *k == key)
                    .ok_or_else(|| PromptError::MissingPlaceholder(key.to_owned()))?;
                out.push_str(val.1);
                rest = &after[close + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

pub fn controllers_text(skills: &[&SkillDef]) -> String {
    skills.iter().map(|s| s.describe()).collect::<Vec<_>>().join("\n")
}

pub fn typed_objects_text(s: &SceneState) -> String {
    typed_objects(s).iter().map(|(n, t)| format!("{n}: {t}")).collect::<Vec<_>>().join("\n")
}

pub fn goal_text(env: &Env, s: &SceneState) -> String {
    let atoms: Vec<String> = goal_atoms(env.variant().env, s).iter().map(|a| a.to_string()).collect();
    format!("{}\n(and {})", env.goal().description, atoms.join(" "))
}

/// Symbolic atoms followed by every object's full feature vector.
pub fn init_state_text(env: &Env, s: &SceneState) -> String {
    let mut out = String::from("Initial predicates:\n");
    for a in abstract_state(s, &predicates_for(env.variant().env)) {
        let _ = writeln!(out, "{a}");
    }
    out.push_str("Object features:");
    for (name, o) in &s.objects {
        let _ = write!(out, "\n{name} ({}):", o.ty);
        for (i, (f, _)) in o.ty.def().features.iter().enumerate() {
            let _ = write!(out, "{} {f}={}", if i == 0 { "" } else { "," }, o.features[i]);
        }
    }
    let held: Vec<&str> = s.held.iter().map(|h| &**h).collect();
    let _ = write!(out, "\nHeld objects: [{}]", held.join(", "));
    out
}

/// Each example is headed by its line count so the joined text decodes uniquely.
fn examples_text(examples: &[String]) -> String {
    examples
        .iter()
        .enumerate()
        .map(|(i, e)| format!("Example {} ({} lines):\n{e}", i + 1, e.split('\n').count()))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Instantiates the zero-shot or in-context template for this env and state.
pub fn build_prompt(
    env: &Env,
    state: &SceneState,
    skills: &[&SkillDef],
    mode: &PromptMode,
) -> Result<String, PromptError> {
    let controllers = controllers_text(skills);
    let objects = typed_objects_text(state);
    let types = type_hierarchy_text();
    let goal = goal_text(env, state);
    let init = init_state_text(env, state);
    let mut fields = vec![
        ("controllers", controllers.as_str()),
        ("typed_objects", objects.as_str()),
        ("type_hierarchy", types.as_str()),
        ("goal_str", goal.as_str()),
        ("init_state_str", init.as_str()),
    ];
    match mode {
        PromptMode::ZeroShot => render_template(LLM_PLAN_TEMPLATE, &fields),
        PromptMode::InContext(ex) => {
            if ex.is_empty() {
                return Err(PromptError::NoExamples);
            }
            let ex = examples_text(ex);
            fields.push(("in_context_examples", ex.as_str()));
            render_template(LLM_CON_TEMPLATE, &fields)
        }
    }
}

/// Parses the lines after the last `Plan:` line as `name(obj:type, ...)[v, ...]`.
pub fn parse_plan(text: &str) -> Result<Vec<PlanStep>, PlanParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().rposition(|l| l.trim() == "Plan:").ok_or(PlanParseError::NoPlanBlock)?;
    let mut plan = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(start + 1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let step = parse_step(line).map_err(|reason| PlanParseError::LineParseError { line: i + 1, reason })?;
        plan.push(step);
    }
    Ok(plan)
}

fn parse_step(line: &str) -> Result<PlanStep, String> {
    let open = line.find('(').ok_or("missing `(`")?;
    let name = line[..open].trim();
    if !is_ident(name) {
        return Err(format!("bad skill name `{name}`"));
    }
    let rest = &line[open + 1..];
    let close = rest.find(')').ok_or("missing `)`")?;
    let mut objects = Vec::new();
    for arg in split_list(&rest[..close]) {
        let (o, t) = arg.split_once(':').ok_or_else(|| format!("object `{arg}` is not `name:type`"))?;
        let (o, t) = (o.trim(), t.trim());
        if o.is_empty() || t.is_empty() {
            return Err(format!("object `{arg}` is not `name:type`"));
        }
        objects.push((o.to_owned(), t.to_owned()));
    }
    let rest = rest[close + 1..].trim_start();
    let inner = rest.strip_prefix('[').ok_or("missing `[`")?;
    let end = inner.find(']').ok_or("missing `]`")?;
    if !inner[end + 1..].trim().is_empty() {
        return Err(format!("trailing text `{}`", inner[end + 1..].trim()));
    }
    let mut params = Vec::new();
    for v in split_list(&inner[..end]) {
        let x: f64 = v.parse().map_err(|_| format!("parameter `{v}` is not a number"))?;
        if !x.is_finite() {
            return Err(format!("parameter `{v}` is not finite"));
        }
        params.push(x);
    }
    Ok(PlanStep { skill: name.to_owned(), objects, params })
}

fn split_list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(str::trim).collect()
    }
}

/// Checks skill names and arities; reports the first offending line of `text`.
pub fn validate_plan(text: &str, plan: &[PlanStep], skills: &[&SkillDef]) -> Result<(), PlanParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().rposition(|l| l.trim() == "Plan:").ok_or(PlanParseError::NoPlanBlock)?;
    let step_lines = (start + 1..lines.len()).filter(|&i| !lines[i].trim().is_empty());
    for (step, i) in plan.iter().zip(step_lines) {
        let err = |reason: String| PlanParseError::LineParseError { line: i + 1, reason };
        let Some(skill) = skills.iter().find(|s| s.name == step.skill) else {
            return Err(err(format!("unknown skill `{}`", step.skill)));
        };
        if step.objects.len() != skill.params.len() {
            return Err(err(format!(
                "{} takes {} objects, got {}",
                skill.name,
                skill.params.len(),
                step.objects.len()
            )));
        }
        if step.params.len() != skill.num_params() {
            return Err(err(format!(
                "{} takes {} parameters, got {}",
                skill.name,
                skill.num_params(),
                step.params.len()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct LlmConfig {
    /// Model id sent with the request; live runs may override it from `KINDER_LLM_MODEL`.
    pub model: String,
    pub temperature: f64,
    pub option_step_cap: usize,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self { model: "gpt-5.2".into(), temperature: 1.0, option_step_cap: crate::symbols::OPTION_STEP_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct LlmOutcome {
    pub request: LlmPlanRequest,
    pub response: LlmPlanResponse,
    /// Concatenated option actions; absent on a parse or initiation failure.
    pub actions: Option<Vec<ActionDelta>>,
    pub failure: Option<String>,
    /// Prompt building, the request, parsing, and option simulation.
    pub inference_time: Duration,
}

/// One request, then open-loop rollout of the parsed skills on a simulator.
pub fn llm_solve(
    env: &Env,
    state: &SceneState,
    transport: &mut dyn Transport,
    mode: &PromptMode,
    cfg: &LlmConfig,
    seed: u64,
) -> Result<LlmOutcome, LlmError> {
    let t0 = Instant::now();
    let id = env.variant().env;
    let skills = skill_registry(id);
    let prompt = build_prompt(env, state, &skills, mode)?;
    let request = LlmPlanRequest { prompt, model: cfg.model.clone(), temperature: cfg.temperature };
    let raw = transport.complete(&request)?;
    let response = LlmPlanResponse::from_raw(raw, &skills);
    let mut out = LlmOutcome { request, response, actions: None, failure: None, inference_time: Duration::ZERO };
    let Some(plan) = out.response.plan.clone() else {
        out.failure = out.response.diagnostics.first().map(|d| d.to_string());
        out.inference_time = t0.elapsed();
        return Ok(out);
    };
    let mut sim = Env::from_state(*env.variant(), env.seed(), state.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut actions = Vec::new();
    for step in &plan {
        let skill = skill_by_name(id, &step.skill).expect("validated skill");
        let objects: Vec<&str> = step.objects.iter().map(|(o, _)| o.as_str()).collect();
        let exec = ExecConfig { max_steps: cfg.option_step_cap, seed: rng.next_u64() };
        match crate::symbols::execute_option(&mut sim, skill, &objects, &step.params, &exec) {
            Ok(traj) => actions.extend(traj.actions),
            Err(e) => {
                out.failure = Some(e.to_string());
                out.inference_time = t0.elapsed();
                return Ok(out);
            }
        }
    }
    out.actions = Some(actions);
    out.inference_time = t0.elapsed();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LlmError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}
