#[path = "support/cassettes.rs"]
mod support;

use kinder_core::baselines::{
    build_prompt, controllers_text, goal_text, in_context_examples, init_state_text, llm_solve, parse_plan,
    render_template, typed_objects_text, Cassette, HttpTransport, LlmConfig, LlmError, PlanParseError, PromptError,
    PromptMode, Recorder, StubTransport, Transport, LLM_CON_TEMPLATE, LLM_PLAN_TEMPLATE,
};
use kinder_core::symbols::{skill_registry, type_hierarchy_text, TYPE_HIERARCHY};
use kinder_env::{Env, EnvId, VariantSpec, ROBOT};

fn env(v: &str, seed: u64) -> Env {
    Env::new(v.parse::<VariantSpec>().unwrap(), seed).unwrap()
}

fn zero_shot(e: &Env) -> String {
    build_prompt(e, e.state(), &skill_registry(e.variant().env), &PromptMode::ZeroShot).unwrap()
}

#[test]
fn zero_shot_prompt_is_plain_substitution_of_the_template() {
    let e = env("Motion2D-p0", 0);
    let skills = skill_registry(EnvId::Motion2D);
    let expected = LLM_PLAN_TEMPLATE
        .replace("{controllers}", &controllers_text(&skills))
        .replace("{typed_objects}", &typed_objects_text(e.state()))
        .replace("{type_hierarchy}", &type_hierarchy_text())
        .replace("{goal_str}", &goal_text(&e, e.state()))
        .replace("{init_state_str}", &init_state_text(&e, e.state()));
    let p = zero_shot(&e);
    assert_eq!(p, expected);
    assert!(p.lines().any(|l| l == "Plan:"));
    assert!(p.contains("below the 'Plan:' heading"));
    assert!(p.contains("MoveTo(target:region): ParameterizedController(types=[region])"));
    assert!(p.contains("params_space=Box([-3.142], [3.142], (1,), float32)"));
}

#[test]
fn in_context_prompt_embeds_examples_between_goal_and_init() {
    let e = env("StickButton2D-b2", 3);
    let ex = in_context_examples(EnvId::StickButton2D);
    assert_eq!(ex.len(), 2);
    let p =
        build_prompt(&e, e.state(), &skill_registry(EnvId::StickButton2D), &PromptMode::InContext(ex.clone())).unwrap();
    let goal = p.find(&goal_text(&e, e.state())).unwrap();
    let init = p.find(&init_state_text(&e, e.state())).unwrap();
    let a = p.find(&ex[0]).unwrap();
    let b = p.find(&ex[1]).unwrap();
    assert!(goal < a && a < b && b < init);
    assert!(p.starts_with("Create a high-level plan"));
    assert!(p.contains("In-context examples:\n"));
    let head = LLM_CON_TEMPLATE.split("{controllers}").next().unwrap();
    assert!(p.starts_with(head));
}

#[test]
fn every_env_renders_both_prompts() {
    for id in EnvId::ALL {
        let v = VariantSpec::new(id, if id == EnvId::Motion2D { 0 } else { 1 });
        let e = Env::new(v, 0).unwrap();
        for mode in [PromptMode::ZeroShot, PromptMode::InContext(in_context_examples(id))] {
            let p = build_prompt(&e, e.state(), &skill_registry(id), &mode).unwrap();
            assert!(!p.contains("{controllers}") && !p.contains("{init_state_str}"), "{id}");
            for s in skill_registry(id) {
                assert!(p.contains(&s.describe()), "{id} {}", s.name);
            }
        }
    }
}

#[test]
fn built_in_examples_parse_against_their_registry() {
    for id in EnvId::ALL {
        let skills = skill_registry(id);
        for ex in in_context_examples(id) {
            let plan = parse_plan(&ex).unwrap();
            kinder_core::baselines::validate_plan(&ex, &plan, &skills).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }
}

#[test]
fn unresolved_placeholder_is_reported() {
    let err = render_template("a {controllers} b {goal_str}", &[("controllers", "x")]).unwrap_err();
    assert_eq!(err, PromptError::MissingPlaceholder("goal_str".into()));
    assert_eq!(render_template("{a} {b}", &[("a", "{b}"), ("b", "2")]).unwrap(), "{b} 2");
    assert_eq!(render_template("{ not a key }", &[]).unwrap(), "{ not a key }");
}

#[test]
fn in_context_mode_needs_examples() {
    let e = env("Motion2D-p0", 0);
    let err =
        build_prompt(&e, e.state(), &skill_registry(EnvId::Motion2D), &PromptMode::InContext(vec![])).unwrap_err();
    assert_eq!(err, PromptError::NoExamples);
}

#[test]
fn type_hierarchy_lines_round_trip() {
    let mut back = Vec::new();
    for line in type_hierarchy_text().lines() {
        let (kids, parent) = line.split_once(" - ").unwrap();
        for k in kids.split(' ') {
            back.push((k.to_string(), parent.to_string()));
        }
    }
    let mut want: Vec<(String, String)> = TYPE_HIERARCHY.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    back.sort();
    want.sort();
    assert_eq!(back, want);
}

#[test]
fn prompt_is_injective_in_state_mode_and_examples() {
    let e = env("Motion2D-p0", 0);
    let skills = skill_registry(EnvId::Motion2D);
    let base = zero_shot(&e);
    let mut s = e.state().clone();
    let x = &mut s.get_mut(ROBOT).unwrap().features[0];
    *x = f64::from_bits(x.to_bits() + 1);
    assert_ne!(build_prompt(&e, &s, &skills, &PromptMode::ZeroShot).unwrap(), base);
    assert_ne!(zero_shot(&env("Motion2D-p0", 1)), base);
    assert_ne!(zero_shot(&env("Motion2D-p1", 0)), base);
    let one = build_prompt(&e, e.state(), &skills, &PromptMode::InContext(vec!["a".into()])).unwrap();
    let two = build_prompt(&e, e.state(), &skills, &PromptMode::InContext(vec!["a".into(), "b".into()])).unwrap();
    let joined =
        build_prompt(&e, e.state(), &skills, &PromptMode::InContext(vec!["a\n\nExample 2 (1 lines):\nb".into()]))
            .unwrap();
    assert_ne!(one, base);
    assert_ne!(one, two);
    assert_ne!(two, joined);
}

#[test]
fn parses_single_step() {
    let p = parse_plan("Plan:\nMoveTo(target:region)[0.0]").unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].skill, "MoveTo");
    assert_eq!(p[0].objects, vec![("target".to_string(), "region".to_string())]);
    assert_eq!(p[0].params, vec![0.0]);
}

#[test]
fn prose_only_has_no_plan_block() {
    assert_eq!(parse_plan("I would move the robot to the target."), Err(PlanParseError::NoPlanBlock));
}

#[test]
fn golden_two_step_parse() {
    let text = "Reasoning first.\nPlan:\nPick(block1:block)[0.25]\nPlace(block1:block, surf:region)[0.5]\n";
    let p = parse_plan(text).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!((p[0].skill.as_str(), p[0].params.as_slice()), ("Pick", &[0.25][..]));
    assert_eq!((p[1].skill.as_str(), p[1].params.as_slice()), ("Place", &[0.5][..]));
    assert_eq!(p[1].objects[1], ("surf".to_string(), "region".to_string()));
}

#[test]
fn parse_uses_last_plan_line_and_allows_empty_lists() {
    let text = "Plan:\nBogus\nrevised:\nPlan:\n\nPressButton(button0:button)[]\nNoop()[ ]\n";
    let p = parse_plan(text).unwrap();
    assert_eq!(p.len(), 2);
    assert!(p[0].params.is_empty() && p[1].objects.is_empty());
}

#[test]
fn malformed_lines_carry_line_numbers() {
    for (text, line) in [
        ("Plan:\nMoveTo(target:region)[fast]", 2),
        ("x\nPlan:\nMoveTo(target:region)[0.1]\n1. MoveTo(target:region)[0.1]", 4),
        ("Plan:\nMoveTo(target)[0.1]", 2),
        ("Plan:\nMoveTo(target:region)", 2),
        ("Plan:\nMoveTo(target:region)[0.1] then stop", 2),
        ("Plan:\n**MoveTo(target:region)[0.1]**", 2),
        ("Plan:\nMoveTo(target:region)[NaN]", 2),
    ] {
        match parse_plan(text) {
            Err(PlanParseError::LineParseError { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn cassettes_are_current() {
    let cases = support::cases();
    if std::env::var("KINDER_BLESS").is_ok() {
        cases.iter().for_each(support::Case::bless);
    }
    for c in &cases {
        let e = Env::new(c.variant(), c.seed).unwrap();
        let p = build_prompt(&e, e.state(), &skill_registry(c.variant().env), &c.prompt_mode()).unwrap();
        let tape = c.cassette();
        assert_eq!(tape.exchanges.len(), 1, "{}", c.file);
        assert!(tape.exchanges[0].request.prompt == p, "{} is stale; rerun with KINDER_BLESS=1", c.file);
    }
}

#[test]
fn golden_cassettes_succeed_end_to_end() {
    let cases = support::cases();
    let golden: Vec<_> = cases.iter().filter(|c| c.expect == "success").collect();
    assert!(golden.iter().any(|c| c.variant().env == EnvId::Motion2D));
    assert!(golden.iter().any(|c| c.variant().env == EnvId::StickButton2D));
    for c in golden {
        let (out, solved) = c.run();
        assert!(out.response.diagnostics.is_empty(), "{}", c.file);
        assert!(out.failure.is_none(), "{}: {:?}", c.file, out.failure);
        assert!(solved, "{}", c.file);
    }
}

#[test]
fn malformed_cassettes_fail_with_diagnostics() {
    let cases = support::cases();
    let bad: Vec<_> = cases.iter().filter(|c| c.expect != "success").collect();
    assert!(bad.len() >= 3);
    for c in bad {
        let (out, solved) = c.run();
        assert!(!solved && out.actions.is_none() && out.response.plan.is_none(), "{}", c.file);
        let d = &out.response.diagnostics;
        assert_eq!(d.len(), 1, "{}", c.file);
        match (c.expect.as_str(), &d[0]) {
            ("no_plan_block", PlanParseError::NoPlanBlock) => {}
            ("line_parse_error", PlanParseError::LineParseError { .. }) => {}
            (want, got) => panic!("{}: expected {want}, got {got:?}", c.file),
        }
        assert_eq!(out.failure.as_deref(), Some(d[0].to_string().as_str()));
    }
}

#[test]
fn unknown_skill_is_a_recorded_line_error() {
    let e = env("Motion2D-p0", 0);
    let mut t = StubTransport::new(["Plan:\nMoveTo(target:region)[0.0]\nFly(robot:robot)[1.0]"]);
    let out = llm_solve(&e, e.state(), &mut t, &PromptMode::ZeroShot, &LlmConfig::default(), 0).unwrap();
    assert!(out.actions.is_none());
    match &out.response.diagnostics[..] {
        [PlanParseError::LineParseError { line: 3, reason }] => assert!(reason.contains("Fly")),
        d => panic!("{d:?}"),
    }
    assert_eq!(t.requests.len(), 1);
}

#[test]
fn initiation_failure_yields_no_actions() {
    let e = env("StickButton2D-b1", 0);
    let mut t = StubTransport::new(["Plan:\nPressWithStick(stick:stick, button0:button)[0.0]"]);
    let out = llm_solve(&e, e.state(), &mut t, &PromptMode::ZeroShot, &LlmConfig::default(), 0).unwrap();
    assert!(out.response.plan.is_some());
    assert!(out.actions.is_none());
    assert!(out.failure.unwrap().contains("PressWithStick"));
}

#[test]
fn transport_errors_carry_the_exchange() {
    let e = env("Motion2D-p0", 0);
    let mut t = StubTransport::default();
    t.push_error("connection reset");
    match llm_solve(&e, e.state(), &mut t, &PromptMode::ZeroShot, &LlmConfig::default(), 0) {
        Err(LlmError::Transport(err)) => {
            assert_eq!(err.message, "connection reset");
            assert_eq!(err.request.prompt, zero_shot(&e));
        }
        other => panic!("{other:?}"),
    }
    let mut empty = Cassette::default();
    assert!(matches!(
        llm_solve(&e, e.state(), &mut empty, &PromptMode::ZeroShot, &LlmConfig::default(), 0),
        Err(LlmError::Transport(_))
    ));
}

#[test]
fn recorder_output_replays_identically() {
    let e = env("Motion2D-p1", 2);
    let resp = "Plan:\nMoveTo(target:region)[0.0]";
    let mut rec = Recorder::new(StubTransport::new([resp]));
    let first = llm_solve(&e, e.state(), &mut rec, &PromptMode::ZeroShot, &LlmConfig::default(), 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tape.jsonl");
    rec.cassette.save(&path).unwrap();
    let mut tape = Cassette::load(&path).unwrap();
    assert_eq!(tape.exchanges, rec.cassette.exchanges);
    let second = llm_solve(&e, e.state(), &mut tape, &PromptMode::ZeroShot, &LlmConfig::default(), 4).unwrap();
    assert_eq!(first.request, second.request);
    assert_eq!(first.response, second.response);
    assert_eq!(first.actions, second.actions);
}

#[test]
fn malformed_cassette_line_is_reported() {
    let err = Cassette::from_jsonl("\n{\"request\": 1}\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}

/// Needs `KINDER_LLM_URL` (and usually `KINDER_LLM_API_KEY`); run with `--ignored`.
#[test]
#[ignore]
fn live_transport_smoke() {
    let Some(mut t) = HttpTransport::from_env() else {
        eprintln!("live transport not configured");
        return;
    };
    let e = env("Motion2D-p0", 0);
    let mut cfg = LlmConfig::default();
    if let Ok(m) = std::env::var(kinder_core::baselines::MODEL_VAR) {
        cfg.model = m;
    }
    let req = kinder_core::baselines::LlmPlanRequest {
        prompt: zero_shot(&e),
        model: cfg.model,
        temperature: cfg.temperature,
    };
    match t.complete(&req) {
        Ok(text) => eprintln!(
            "{}",
            kinder_core::baselines::LlmPlanResponse::from_raw(text, &skill_registry(EnvId::Motion2D)).raw
        ),
        Err(e) => eprintln!("{e}: {:?}", e.raw),
    }
}
