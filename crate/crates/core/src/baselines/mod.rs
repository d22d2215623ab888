//! Planner baselines: bilevel planning, predictive-sampling MPC, and an LLM planner client.

mod bilevel;
mod examples;
mod llm;
mod mpc;

pub use bilevel::{bilevel_solve, BilevelConfig, BilevelResult, BilevelStats};
pub use examples::in_context_examples;
pub use llm::{
    build_prompt, controllers_text, goal_text, init_state_text, llm_solve, parse_plan, render_template,
    typed_objects_text, validate_plan, Cassette, CassetteError, Exchange, HttpTransport, LlmConfig, LlmError,
    LlmOutcome, LlmPlanRequest, LlmPlanResponse, PlanParseError, PlanStep, PromptError, PromptMode, Recorder,
    StubTransport, Transport, TransportError, KEY_VAR, LLM_CON_TEMPLATE, LLM_PLAN_TEMPLATE, MODEL_VAR, URL_VAR,
};
pub use mpc::{
    interpolate, mpc_act, rollout, shift_one_step, zero_control_points, ControlPoints, MpcConfig, MpcStep, ACTION_RANGE,
};
