//! Observation and action noise wrappers; the wrapped env stays noiseless.

use kinder_env::{noisy_action, noisy_observation, ActionDelta, Env, SceneState, StepOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct NoisyEnv {
    pub env: Env,
    pub obs_sigma: f64,
    pub act_sigma: f64,
    obs_rng: ChaCha8Rng,
    act_rng: ChaCha8Rng,
}

impl NoisyEnv {
    pub fn new(env: Env, obs_sigma: f64, act_sigma: f64, seed: u64) -> Self {
        assert!(obs_sigma >= 0.0 && act_sigma >= 0.0, "noise sigmas must be non-negative");
        Self {
            env,
            obs_sigma,
            act_sigma,
            obs_rng: ChaCha8Rng::seed_from_u64(seed),
            act_rng: ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15),
        }
    }

    /// The current state as the agent sees it.
    pub fn observe(&mut self) -> SceneState {
        noisy_observation(self.env.state(), self.obs_sigma, &mut self.obs_rng)
    }

    /// Steps the true env with a perturbed action; the outcome state is observed through the noise.
    pub fn step(&mut self, a: ActionDelta) -> StepOutcome {
        let a = noisy_action(&a, self.act_sigma, &mut self.act_rng);
        let mut out = self.env.step(a);
        out.state = noisy_observation(&out.state, self.obs_sigma, &mut self.obs_rng);
        out
    }

    pub fn is_solved(&self) -> bool {
        self.env.is_solved()
    }
}

pub fn wrap_obs_noise(env: Env, sigma: f64, seed: u64) -> NoisyEnv {
    NoisyEnv::new(env, sigma, 0.0, seed)
}

pub fn wrap_act_noise(env: Env, sigma: f64, seed: u64) -> NoisyEnv {
    NoisyEnv::new(env, 0.0, sigma, seed)
}
