//! One live teleoperation episode driven at a fixed tick.

use std::path::{Path, PathBuf};

use kinder_core::demos::{DemoError, DemoHeader, DemoRecord, DemoSource};
use kinder_env::{ActionDelta, Env, SceneState, VariantSpec};
use kinder_geom::{Pose2, Shape2};
use serde_json::value::RawValue;

use crate::protocol::{ClientMsg, Frame, ShapeDesc, VacuumCmd};

/// Latest level-held input.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Input {
    pub axes: [f64; 3],
    pub arm: i8,
    pub vacuum: Option<VacuumCmd>,
}

impl Input {
    pub fn action(&self) -> ActionDelta {
        let vac = match self.vacuum {
            Some(VacuumCmd::On) => 1.0,
            Some(VacuumCmd::Off) => -1.0,
            None => 0.0,
        };
        ActionDelta::new([self.axes[0], self.axes[1], self.axes[2], f64::from(self.arm), vac])
    }
}

pub struct Session {
    pub id: String,
    variant: VariantSpec,
    seed: u64,
    env: Env,
    tick: u64,
    steps: usize,
    input: Input,
    recording: Vec<ActionDelta>,
    done: bool,
    reward: f64,
}

impl Session {
    pub fn new(id: String, variant: VariantSpec, seed: u64) -> Result<Self, kinder_env::EnvError> {
        let env = Env::new(variant, seed)?;
        let done = env.is_solved();
        Ok(Self {
            id,
            variant,
            seed,
            env,
            tick: 0,
            steps: 0,
            input: Input::default(),
            recording: Vec::new(),
            done,
            reward: 0.0,
        })
    }

    pub fn variant(&self) -> VariantSpec {
        self.variant
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn state(&self) -> &SceneState {
        self.env.state()
    }

    pub fn recording(&self) -> &[ActionDelta] {
        &self.recording
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn set_input(&mut self, msg: &ClientMsg) {
        if let ClientMsg::Input { axes, arm, vacuum } = msg {
            self.input = Input { axes: *axes, arm: *arm, vacuum: *vacuum };
        }
    }

    pub fn frame(&self) -> Frame {
        Frame {
            tick: self.tick,
            scene: RawValue::from_string(self.env.state().to_json()).expect("scene JSON is valid"),
            shapes: shapes(self.env.state()),
            reward: self.reward,
            done: self.done,
            steps: self.steps,
        }
    }

    /// Applies the held input once; paused (no frame) once the episode is done.
    pub fn tick(&mut self) -> Option<Frame> {
        if self.done {
            return None;
        }
        let a = self.input.action();
        let out = self.env.step(a);
        self.recording.push(a);
        self.steps += 1;
        self.tick += 1;
        self.reward = out.reward;
        self.done = out.terminated;
        Some(self.frame())
    }

    /// Restarts the episode from the session seed; the tick counter keeps counting.
    pub fn reset(&mut self) -> Frame {
        self.env = Env::new(self.variant, self.seed).expect("variant was valid at creation");
        self.recording.clear();
        self.steps = 0;
        self.reward = 0.0;
        self.input = Input::default();
        self.done = self.env.is_solved();
        self.tick += 1;
        self.frame()
    }

    pub fn demo(&self) -> DemoRecord {
        DemoRecord {
            header: DemoHeader::new(self.variant, self.seed, DemoSource::Teleop),
            steps: self.recording.clone(),
            terminal_success: self.env.is_solved(),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf, DemoError> {
        std::fs::create_dir_all(dir)?;
        let demo = self.demo();
        let path =
            dir.join(format!("teleop_{}_{}_{}.{}", self.variant, self.id, self.tick, kinder_core::demos::DEMO_EXT));
        demo.write(&path)?;
        Ok(path)
    }
}

fn desc(name: &str, shape: &Shape2, pose: Pose2, color: [f64; 3]) -> ShapeDesc {
    let (kind, dims, parts) = match shape {
        Shape2::Circle { radius } => ("circle", vec![*radius], Vec::new()),
        Shape2::Rect { half_w, half_h } => ("rect", vec![*half_w, *half_h], Vec::new()),
        Shape2::Compound { parts } => {
            ("compound", Vec::new(), parts.iter().map(|(s, p)| desc(name, s, *p, color)).collect())
        }
    };
    ShapeDesc { name: name.to_string(), kind: kind.to_string(), dims, color, pose: [pose.x, pose.y, pose.theta], parts }
}

/// Drawing descriptors for every object, in scene order.
pub fn shapes(s: &SceneState) -> Vec<ShapeDesc> {
    s.objects.iter().map(|(n, o)| desc(n, &o.shape(), o.pose(), o.color())).collect()
}
