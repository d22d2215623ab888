use std::time::Duration;

use kinder_core::baselines::{
    bilevel_solve, interpolate, mpc_act, rollout, shift_one_step, zero_control_points, BilevelConfig, MpcConfig,
};
use kinder_env::{
    robot_collides, step, ActionDelta, Env, EnvId, ObjectType, RobotConfig, SceneState, VariantSpec, ROBOT,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn variant(s: &str) -> VariantSpec {
    s.parse().unwrap()
}

fn replay_solves(v: VariantSpec, seed: u64, actions: &[ActionDelta]) -> bool {
    let mut e = Env::new(v, seed).unwrap();
    for a in actions {
        e.step(*a);
    }
    e.is_solved()
}

#[test]
fn bilevel_motion_plans_replay_to_the_goal() {
    let v = variant("Motion2D-p0");
    for seed in 0..5 {
        let env = Env::new(v, seed).unwrap();
        let r = bilevel_solve(&env, env.state(), &BilevelConfig::default(), seed);
        let actions = r.actions.expect("plan found");
        assert!(!actions.is_empty());
        assert!(replay_solves(v, seed, &actions), "seed {seed}");
        assert!(r.stats.abstract_plans >= 1);
    }
}

#[test]
fn bilevel_plans_replay_across_envs() {
    for (v, seed) in
        [("StickButton2D-b1", 0), ("PushPullHook2D-b1", 1), ("Obstruction2D-o1", 2), ("ClutteredStorage2D-b1", 3)]
    {
        let v = variant(v);
        let env = Env::new(v, seed).unwrap();
        let r = bilevel_solve(&env, env.state(), &BilevelConfig::default(), seed);
        let actions = r.actions.unwrap_or_else(|| panic!("{v:?}"));
        assert!(replay_solves(v, seed, &actions), "{v:?}");
        assert!(r.stats.max_samples_at_step <= 3);
    }
}

#[test]
fn bilevel_is_deterministic() {
    let v = variant("StickButton2D-b2");
    let env = Env::new(v, 4).unwrap();
    let a = bilevel_solve(&env, env.state(), &BilevelConfig::default(), 9).actions;
    let b = bilevel_solve(&env, env.state(), &BilevelConfig::default(), 9).actions;
    assert_eq!(a, b);
}

#[test]
fn bilevel_goal_already_satisfied_is_empty() {
    let v = variant("Motion2D-p0");
    let env = Env::new(v, 0).unwrap();
    let mut s = env.state().clone();
    let t = s.obj("target").pose();
    let r = s.get_mut(ROBOT).unwrap();
    r.features[0] = t.x;
    r.features[1] = t.y;
    let env = Env::from_state(v, 0, s.clone());
    assert!(env.is_solved());
    let out = bilevel_solve(&env, &s, &BilevelConfig::default(), 0);
    assert_eq!(out.actions, Some(vec![]));
}

fn wall(x: f64, y: f64, hw: f64, hh: f64) -> Vec<f64> {
    vec![x, y, 0.0, hw, hh, 0.0, 0.1, 0.1, 0.1, 1.0]
}

/// StickButton2D with a closed cage of walls around the only button.
fn walled_stick_button(seed: u64) -> (VariantSpec, SceneState) {
    let v = variant("StickButton2D-b1");
    let mut s = Env::new(v, seed).unwrap().state().clone();
    let b = s.obj("button0").pose();
    let r = s.obj("button0").get("radius");
    let (inner, t) = (r + 0.05, 0.05);
    let outer = inner + t;
    s.insert("cage_left", ObjectType::Wall, wall(b.x - inner - t / 2.0, b.y, t / 2.0, outer));
    s.insert("cage_right", ObjectType::Wall, wall(b.x + inner + t / 2.0, b.y, t / 2.0, outer));
    s.insert("cage_bottom", ObjectType::Wall, wall(b.x, b.y - inner - t / 2.0, outer, t / 2.0));
    s.insert("cage_top", ObjectType::Wall, wall(b.x, b.y + inner + t / 2.0, outer, t / 2.0));
    assert!(!robot_collides(&s, &RobotConfig::from_state(&s)));
    (v, s)
}

#[test]
fn bilevel_walled_button_fails_within_deadline() {
    let (v, s) = walled_stick_button(0);
    let env = Env::from_state(v, 0, s.clone());
    let cfg = BilevelConfig::default();
    let out = bilevel_solve(&env, &s, &cfg, 0);
    assert!(out.actions.is_none());
    assert!(out.stats.abstract_plans >= 1, "search still yields abstract plans");
    assert!(out.stats.options_simulated >= 1);
    assert!(out.stats.max_samples_at_step <= cfg.samples_per_step);
    assert!(out.stats.total_time <= cfg.abstract_deadline + Duration::from_millis(100));
}

#[test]
fn bilevel_respects_a_short_deadline() {
    let (v, s) = walled_stick_button(1);
    let env = Env::from_state(v, 1, s.clone());
    let cfg = BilevelConfig { abstract_deadline: Duration::from_millis(200), ..BilevelConfig::default() };
    let out = bilevel_solve(&env, &s, &cfg, 0);
    assert!(out.actions.is_none());
    assert!(out.stats.search_time <= cfg.abstract_deadline + Duration::from_millis(100), "{:?}", out.stats);
    assert!(out.stats.max_samples_at_step <= 3);
}

#[test]
fn zero_control_points_interpolate_to_zero_actions() {
    let cfg = MpcConfig::default();
    let acts = interpolate(&zero_control_points(&cfg), cfg.horizon);
    assert_eq!(acts.len(), 100);
    assert!(acts.iter().all(|a| *a == ActionDelta::ZERO));
}

#[test]
fn interpolation_hits_knots_and_is_linear_between() {
    let cp: Vec<[f64; 5]> = (0..10).map(|k| [k as f64 / 10.0, -(k as f64) / 10.0, 0.0, 0.5, 0.0]).collect();
    let acts = interpolate(&cp, 100);
    for (k, knot) in cp.iter().enumerate() {
        let t = (k as f64 * 99.0 / 9.0).round() as usize;
        let x = t as f64 * 9.0 / 99.0;
        assert!((acts[t].0[0] - x / 10.0).abs() < 1e-12, "{k}");
        if (x - k as f64).abs() < 1e-12 {
            assert_eq!(acts[t].0[0], knot[0]);
        }
    }
    let shifted = interpolate(&shift_one_step(&cp, 100), 100);
    for t in 0..89 {
        assert!((shifted[t].0[0] - acts[t + 1].0[0]).abs() < 1e-12, "{t}");
    }
    assert!((shifted[99].0[0] - acts[99].0[0]).abs() < 1e-12);
}

/// Motion2D with the robot just left of the target region.
fn one_step_from_goal() -> (VariantSpec, SceneState) {
    let v = variant("Motion2D-p0");
    let mut s = Env::new(v, 0).unwrap().state().clone();
    let t = s.obj("target").clone();
    let (tx, ty, hw) = (t.get("x"), t.get("y"), t.get("half_w"));
    let r = s.get_mut(ROBOT).unwrap();
    r.features[0] = tx - hw - 0.01;
    r.features[1] = ty;
    (v, s)
}

#[test]
fn mpc_one_step_from_goal_terminates() {
    let (v, s) = one_step_from_goal();
    let spec = *Env::from_state(v, 0, s.clone()).spec();
    let cfg = MpcConfig::default();
    let mut hits = 0;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = mpc_act(EnvId::Motion2D, &spec, &s, &cfg, &zero_control_points(&cfg), cfg.noise_sigma, &mut rng);
        let any_one_step = out.best_steps == Some(1);
        let term = step(EnvId::Motion2D, &spec, &s, out.action).terminated;
        assert_eq!(any_one_step, term, "seed {seed}");
        hits += term as usize;
    }
    assert!(hits >= 8, "{hits}");
    let mut warm = zero_control_points(&cfg);
    warm[0] = [1.0, 0.0, 0.0, 0.0, 0.0];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let out = mpc_act(EnvId::Motion2D, &spec, &s, &cfg, &warm, cfg.noise_sigma, &mut rng);
    assert_eq!((out.best, out.best_steps), (0, Some(1)));
    assert!(step(EnvId::Motion2D, &spec, &s, out.action).terminated);
}

#[test]
fn mpc_keeps_incumbent_when_all_fail() {
    let v = variant("Motion2D-p3");
    let s = Env::new(v, 0).unwrap().state().clone();
    let spec = *Env::from_state(v, 0, s.clone()).spec();
    let cfg = MpcConfig { horizon: 5, num_control_points: 2, ..MpcConfig::default() };
    let mut warm = zero_control_points(&cfg);
    warm[0] = [0.3, -0.2, 0.1, 0.0, 0.0];
    assert_eq!(rollout(EnvId::Motion2D, &spec, &s, &interpolate(&warm, cfg.horizon)), None);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let out = mpc_act(EnvId::Motion2D, &spec, &s, &cfg, &warm, cfg.noise_sigma, &mut rng);
    assert_eq!(out.best, 0);
    assert_eq!(out.best_steps, None);
    assert_eq!(out.action, interpolate(&warm, cfg.horizon)[0]);
    assert_eq!(out.warm, shift_one_step(&warm, cfg.horizon));
}

#[test]
fn mpc_is_deterministic_given_rng_state() {
    let v = variant("Motion2D-p1");
    let s = Env::new(v, 2).unwrap().state().clone();
    let spec = *Env::from_state(v, 2, s.clone()).spec();
    let cfg = MpcConfig::default();
    let warm = zero_control_points(&cfg);
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        mpc_act(EnvId::Motion2D, &spec, &s, &cfg, &warm, cfg.noise_sigma, &mut rng)
    };
    assert_eq!(run(), run());
}
