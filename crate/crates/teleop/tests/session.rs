use kinder_env::{ActionDelta, Env, RobotSpec, SceneState, VariantSpec, WORLD};
use kinder_teleop::{
    decode, encode, encode_client, handle_line, ClientMsg, ErrorCode, ServerConfig, ServerMsg, Session, VacuumCmd,
};
use rand::{Rng, SeedableRng};
use serde_json::Value;

fn motion() -> VariantSpec {
    "Motion2D-p0".parse().unwrap()
}

fn input(axes: [f64; 3], arm: i8, vacuum: Option<VacuumCmd>) -> ClientMsg {
    ClientMsg::Input { axes, arm, vacuum }
}

fn error_code(msgs: &[ServerMsg]) -> Option<ErrorCode> {
    match msgs {
        [ServerMsg::Error { code, .. }] => Some(*code),
        _ => None,
    }
}

#[test]
fn zero_input_costs_one_per_tick() {
    let mut s = Session::new("t".into(), motion(), 3).unwrap();
    let before = s.state().to_json();
    for k in 1..=5 {
        let f = s.tick().unwrap();
        assert_eq!(f.reward, -1.0);
        assert_eq!(f.tick, k);
        assert_eq!(f.steps, k as usize);
        assert!(!f.done);
    }
    assert_eq!(s.state().to_json(), before);
}

#[test]
fn held_axis_moves_base_by_max_delta() {
    let max_dx = RobotSpec::default().max_deltas[0];
    let seed =
        (0..100).find(|&seed| Env::new(motion(), seed).unwrap().state().robot().pose().x < WORLD.0 / 2.0).unwrap();
    let mut s = Session::new("t".into(), motion(), seed).unwrap();
    s.set_input(&input([1.0, 0.0, 0.0], 0, None));
    let mut x = s.state().robot().pose().x;
    for _ in 0..10 {
        s.tick().unwrap();
        let nx = s.state().robot().pose().x;
        assert!((nx - x - max_dx).abs() < 1e-12, "{nx} vs {x}");
        x = nx;
    }
}

#[test]
fn input_maps_onto_action_components() {
    let mut s = Session::new("t".into(), motion(), 0).unwrap();
    for (vac, expect) in [(Some(VacuumCmd::On), 1.0), (Some(VacuumCmd::Off), -1.0), (None, 0.0)] {
        s.set_input(&input([0.5, -0.25, 1.0], -1, vac));
        s.tick().unwrap();
        assert_eq!(*s.recording().last().unwrap(), ActionDelta([0.5, -0.25, 1.0, -1.0, expect]));
    }
}

#[test]
fn out_of_range_axes_are_recorded_clamped() {
    let mut s = Session::new("t".into(), motion(), 0).unwrap();
    s.set_input(&input([4.0, -3.0, 0.0], 1, None));
    s.tick().unwrap();
    assert_eq!(s.recording()[0], ActionDelta([1.0, -1.0, 0.0, 1.0, 0.0]));
}

#[test]
fn created_frame_matches_reset_bytes() {
    let cfg = ServerConfig::default();
    let mut session = None;
    let line = encode_client(&ClientMsg::Create { variant: "StickButton2D-b2".into(), seed: Some(42) });
    let out = handle_line(&mut session, &line, &cfg);
    assert!(matches!(&out[0], ServerMsg::Created { seed: 42, .. }));
    let ServerMsg::Frame(f) = &out[1] else { panic!("expected a frame") };
    assert_eq!(f.tick, 0);
    let expected = Env::new("StickButton2D-b2".parse().unwrap(), 42).unwrap().state().to_json();
    assert_eq!(f.scene.get(), expected);
    let wire: Value = serde_json::from_str(&encode(&out[1])).unwrap();
    assert_eq!(wire["v"], 1);
    assert_eq!(wire["type"], "frame");
    assert!(encode(&out[1]).contains(&expected));
}

#[test]
fn shapes_cover_every_object() {
    let s = Session::new("t".into(), "StickButton2D-b1".parse().unwrap(), 0).unwrap();
    let f = s.frame();
    assert_eq!(f.shapes.len(), s.state().objects.len());
    for (d, (name, o)) in f.shapes.iter().zip(&s.state().objects) {
        assert_eq!(d.name, &**name);
        assert!(["circle", "rect", "compound"].contains(&d.kind.as_str()));
        assert_eq!(d.pose[0], o.pose().x);
        assert_eq!(d.kind == "compound", !d.parts.is_empty());
    }
}

#[test]
fn unknown_variant_is_reported() {
    let cfg = ServerConfig::default();
    let mut session = None;
    let out = handle_line(&mut session, r#"{"v":1,"type":"create","variant":"Nope2D-x9"}"#, &cfg);
    assert_eq!(error_code(&out), Some(ErrorCode::BadVariant));
    assert!(session.is_none());
}

#[test]
fn decode_errors_carry_codes() {
    let cases = [
        ("not json", ErrorCode::BadJson),
        (r#"{"type":"reset"}"#, ErrorCode::BadVersion),
        (r#"{"v":2,"type":"reset"}"#, ErrorCode::BadVersion),
        (r#"{"v":1,"type":"teleport"}"#, ErrorCode::UnknownType),
        (r#"{"v":1}"#, ErrorCode::UnknownType),
        (r#"{"v":1,"type":"input","axes":[0,0]}"#, ErrorCode::BadMessage),
        (r#"{"v":1,"type":"input","axes":[0,0,0],"arm":2}"#, ErrorCode::BadMessage),
        (r#"{"v":1,"type":"input","axes":[0,0,0],"vacuum":"maybe"}"#, ErrorCode::BadMessage),
    ];
    for (line, code) in cases {
        assert_eq!(decode(line).unwrap_err().0, code, "{line}");
    }
}

#[test]
fn client_messages_round_trip() {
    let msgs = [
        ClientMsg::Create { variant: "Motion2D-p1".into(), seed: None },
        input([0.1, 0.0, -1.0], 1, Some(VacuumCmd::Off)),
        ClientMsg::Reset {},
        ClientMsg::Save {},
    ];
    for m in msgs {
        assert_eq!(decode(&encode_client(&m)).unwrap(), m);
    }
    let parsed = decode(r#"{"v":1,"type":"input","axes":[0,1,0],"arm":0,"vacuum":null}"#).unwrap();
    assert_eq!(parsed, input([0.0, 1.0, 0.0], 0, None));
}

#[test]
fn commands_before_create_are_rejected() {
    let cfg = ServerConfig::default();
    let mut session = None;
    for line in [r#"{"v":1,"type":"reset"}"#, r#"{"v":1,"type":"save"}"#] {
        assert_eq!(error_code(&handle_line(&mut session, line, &cfg)), Some(ErrorCode::NoSession));
    }
    let create = r#"{"v":1,"type":"create","variant":"Motion2D-p0"}"#;
    assert_eq!(handle_line(&mut session, create, &cfg).len(), 2);
    assert_eq!(error_code(&handle_line(&mut session, create, &cfg)), Some(ErrorCode::SessionExists));
}

#[test]
fn recording_replays_to_every_tenth_frame() {
    let v: VariantSpec = "StickButton2D-b1".parse().unwrap();
    let mut s = Session::new("t".into(), v, 11).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut checked = 0;
    for k in 1..=200u64 {
        if k % 7 == 1 {
            let axes = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let vac = [None, Some(VacuumCmd::On), Some(VacuumCmd::Off)][rng.random_range(0..3)];
            s.set_input(&input(axes, rng.random_range(-1..=1), vac));
        }
        let Some(f) = s.tick() else { break };
        if f.tick % 10 == 0 {
            let mut env = Env::new(v, 11).unwrap();
            for a in s.recording() {
                env.step(*a);
            }
            assert_eq!(env.state().to_json(), f.scene.get());
            checked += 1;
        }
    }
    assert!(checked >= 1);
}

#[test]
fn reset_restarts_from_the_same_seed_and_keeps_ticking() {
    let mut s = Session::new("t".into(), motion(), 9).unwrap();
    let initial = s.state().to_json();
    s.set_input(&input([0.0, 1.0, 0.0], 0, None));
    for _ in 0..4 {
        s.tick();
    }
    let f = s.reset();
    assert_eq!(f.tick, 5);
    assert_eq!(f.steps, 0);
    assert_eq!(f.scene.get(), initial);
    assert!(s.recording().is_empty());
    assert_eq!(s.tick().unwrap().tick, 6);
}

fn drive_toward_target(state: &SceneState) -> [f64; 3] {
    let max = RobotSpec::default().max_deltas;
    let r = state.robot().pose();
    let t = state.obj("target").pose();
    [((t.x - r.x) / max[0]).clamp(-1.0, 1.0), ((t.y - r.y) / max[1]).clamp(-1.0, 1.0), 0.0]
}

#[test]
fn session_pauses_when_done_and_saves_a_verifiable_demo() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = Session::new("t".into(), motion(), 4).unwrap();
    let mut last = None;
    for _ in 0..500 {
        let axes = drive_toward_target(s.state());
        s.set_input(&input(axes, 0, None));
        match s.tick() {
            Some(f) => last = Some(f),
            None => break,
        }
    }
    let last = last.unwrap();
    assert!(last.done && s.is_done());
    assert!(s.tick().is_none());
    let path = s.save(dir.path()).unwrap();
    let demo = kinder_core::demos::DemoRecord::read(&path).unwrap();
    assert_eq!(demo.header.source, kinder_core::demos::DemoSource::Teleop);
    assert_eq!(demo.steps.len(), last.steps);
    assert!(kinder_core::demos::verify_file(&path).unwrap().success);
}
