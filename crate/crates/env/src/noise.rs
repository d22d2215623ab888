use kinder_geom::wrap_angle;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::robot::ActionDelta;
use crate::schema::{robot, ObjectType};
use crate::state::SceneState;

/// A copy of `state` with iid Gaussian noise on every pose feature
/// (x, y, theta, and the arm extension). Dimensions, colors, and flags are
/// left exact. `sigma == 0` returns an identical state.
pub fn noisy_observation<R: Rng>(state: &SceneState, sigma: f64, rng: &mut R) -> SceneState {
    let mut s = state.clone();
    if sigma <= 0.0 {
        return s;
    }
    let n = Normal::new(0.0, sigma).expect("sigma is finite");
    for o in s.objects.values_mut() {
        for &i in o.ty.pose_features() {
            o.features[i] += n.sample(rng);
        }
        if o.ty != ObjectType::Button {
            o.features[2] = wrap_angle(o.features[2]);
        }
        if o.ty == ObjectType::Robot {
            let f = &mut o.features;
            f[robot::EXT] = f[robot::EXT].clamp(f[robot::ARM_MIN], f[robot::ARM_MAX]);
        }
    }
    s
}

/// Gaussian noise on all five components, applied before clamping.
pub fn noisy_action<R: Rng>(a: &ActionDelta, sigma: f64, rng: &mut R) -> ActionDelta {
    if sigma <= 0.0 {
        return *a;
    }
    let n = Normal::new(0.0, sigma).expect("sigma is finite");
    ActionDelta::new(a.0.map(|v| v + n.sample(rng)))
}
