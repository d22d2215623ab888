//! Shared loader for the recorded LLM exchanges under `crates/core/cassettes`.

use std::path::PathBuf;

use kinder_core::baselines::{
    build_prompt, in_context_examples, llm_solve, Cassette, LlmConfig, LlmOutcome, PromptMode,
};
use kinder_core::symbols::skill_registry;
use kinder_env::{Env, VariantSpec};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
pub struct Case {
    pub file: String,
    pub variant: String,
    pub seed: u64,
    pub mode: String,
    pub expect: String,
}

pub fn cassette_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/cassettes")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(cassette_dir().join("manifest.json")).expect("manifest readable");
    serde_json::from_str(&text).expect("manifest parses")
}

impl Case {
    pub fn variant(&self) -> VariantSpec {
        self.variant.parse().expect("variant parses")
    }

    pub fn prompt_mode(&self) -> PromptMode {
        match self.mode.as_str() {
            "zero_shot" => PromptMode::ZeroShot,
            "in_context" => PromptMode::InContext(in_context_examples(self.variant().env)),
            m => panic!("unknown mode {m}"),
        }
    }

    pub fn cassette(&self) -> Cassette {
        Cassette::load(cassette_dir().join(&self.file)).expect("cassette loads")
    }

    /// Replays the cassette, then executes the returned actions on a fresh env.
    pub fn run(&self) -> (LlmOutcome, bool) {
        let env = Env::new(self.variant(), self.seed).expect("env builds");
        let mut tape = self.cassette();
        let out = llm_solve(&env, env.state(), &mut tape, &self.prompt_mode(), &LlmConfig::default(), self.seed)
            .expect("cassette covers the request");
        let mut replay = Env::new(self.variant(), self.seed).expect("env builds");
        let solved = match &out.actions {
            Some(a) => {
                for x in a {
                    replay.step(*x);
                }
                replay.is_solved()
            }
            None => false,
        };
        (out, solved)
    }

    /// Rewrites the recorded prompt for the current renderer, keeping the response.
    #[allow(dead_code)]
    pub fn bless(&self) {
        let env = Env::new(self.variant(), self.seed).expect("env builds");
        let prompt =
            build_prompt(&env, env.state(), &skill_registry(self.variant().env), &self.prompt_mode()).expect("prompt");
        let mut tape = self.cassette();
        let cfg = LlmConfig::default();
        for ex in &mut tape.exchanges {
            ex.request.prompt = prompt.clone();
            ex.request.model = cfg.model.clone();
            ex.request.temperature = cfg.temperature;
        }
        tape.save(cassette_dir().join(&self.file)).expect("cassette writes");
    }
}
