use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::IndexMap;
use kinder_geom::{PlacedShape, Pose2, Shape2};
use serde::Deserialize;

use crate::error::EnvError;
use crate::schema::{button, hook, rect, robot, ObjectType};

pub const ROBOT: &str = "robot";

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectState {
    pub ty: ObjectType,
    pub features: Vec<f64>,
}

impl ObjectState {
    pub fn new(ty: ObjectType, features: Vec<f64>) -> Self {
        debug_assert_eq!(features.len(), ty.dim(), "{ty}");
        Self { ty, features }
    }

    pub fn get(&self, name: &str) -> f64 {
        let i = self.ty.feature_index(name).unwrap_or_else(|| panic!("{} has no feature `{name}`", self.ty));
        self.features[i]
    }

    /// World pose; buttons have no orientation and report theta = 0.
    pub fn pose(&self) -> Pose2 {
        let f = &self.features;
        match self.ty {
            ObjectType::Button => Pose2::new(f[button::X], f[button::Y], 0.0),
            _ => Pose2 { x: f[0], y: f[1], theta: f[2] },
        }
    }

    pub fn set_pose(&mut self, p: Pose2) {
        let f = &mut self.features;
        f[0] = p.x;
        f[1] = p.y;
        if self.ty != ObjectType::Button {
            f[2] = p.theta;
        }
    }

    /// Local-frame shape. Not meaningful for the robot.
    pub fn shape(&self) -> Shape2 {
        let f = &self.features;
        match self.ty {
            ObjectType::Button => Shape2::circle(f[button::RADIUS]),
            ObjectType::Hook => hook_shape(f[hook::LONG_HALF], f[hook::SHORT_HALF], f[hook::THICK_HALF]),
            ObjectType::Robot => Shape2::circle(f[robot::BASE_RADIUS]),
            _ => Shape2::rect(f[rect::HALF_W], f[rect::HALF_H]),
        }
    }

    pub fn placed(&self) -> PlacedShape {
        PlacedShape::new(self.shape(), self.pose())
    }

    pub fn color(&self) -> [f64; 3] {
        let f = &self.features;
        match self.ty {
            ObjectType::Robot => [0.35, 0.35, 0.8],
            ObjectType::Button => [f[button::R], f[button::G], f[button::B]],
            ObjectType::Hook => [f[hook::R], f[hook::G], f[hook::B]],
            _ => [f[rect::R], f[rect::G], f[rect::B]],
        }
    }

    pub fn is_held(&self) -> bool {
        match self.ty {
            ObjectType::Hook => self.features[hook::IS_HELD] > 0.5,
            t if t.is_rect() => self.features[rect::IS_HELD] > 0.5,
            _ => false,
        }
    }

    pub fn set_held(&mut self, held: bool) {
        let v = if held { 1.0 } else { 0.0 };
        match self.ty {
            ObjectType::Hook => self.features[hook::IS_HELD] = v,
            t if t.is_rect() => self.features[rect::IS_HELD] = v,
            _ => {}
        }
    }
}

/// The L-shaped hook: the long bar centered at the origin along +x, the
/// short bar at its +x end rising along +y.
pub fn hook_shape(long_half: f64, short_half: f64, thick_half: f64) -> Shape2 {
    Shape2::compound(vec![
        (Shape2::rect(long_half, thick_half), Pose2::IDENTITY),
        (Shape2::rect(thick_half, short_half), Pose2::new(long_half - thick_half, short_half - thick_half, 0.0)),
    ])
}

/// Object-centric scene: an ordered map from names to typed features.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SceneState {
    pub objects: IndexMap<Arc<str>, ObjectState>,
    /// Names rigidly attached to the robot, in attachment order.
    pub held: Vec<Arc<str>>,
}

impl SceneState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, ty: ObjectType, features: Vec<f64>) {
        self.objects.insert(Arc::from(name), ObjectState::new(ty, features));
    }

    pub fn get(&self, name: &str) -> Option<&ObjectState> {
        self.objects.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut ObjectState> {
        self.objects.get_mut(name)
    }

    /// Panics when the object is missing; for names the caller generated.
    pub fn obj(&self, name: &str) -> &ObjectState {
        self.objects.get(name).unwrap_or_else(|| panic!("no object `{name}`"))
    }

    pub fn robot(&self) -> &ObjectState {
        self.obj(ROBOT)
    }

    pub fn name_arc(&self, name: &str) -> Option<Arc<str>> {
        self.objects.get_key_value(name).map(|(k, _)| k.clone())
    }

    pub fn of_type(&self, ty: ObjectType) -> impl Iterator<Item = (&Arc<str>, &ObjectState)> {
        self.objects.iter().filter(move |(_, o)| o.ty == ty)
    }

    pub fn is_held(&self, name: &str) -> bool {
        self.held.iter().any(|h| &**h == name)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        for (n, o) in &self.objects {
            if o.features.len() != o.ty.dim() {
                return Err(EnvError::InvalidState(format!(
                    "`{n}` has {} features, type {} needs {}",
                    o.features.len(),
                    o.ty,
                    o.ty.dim()
                )));
            }
        }
        for h in &self.held {
            match self.objects.get(h) {
                Some(o) if o.ty.is_graspable() => {}
                Some(o) => return Err(EnvError::InvalidState(format!("held `{h}` is a {}", o.ty))),
                None => return Err(EnvError::InvalidState(format!("held `{h}` does not exist"))),
            }
        }
        Ok(())
    }

    /// Canonical JSON: objects in order, features as 17-significant-digit
    /// doubles, so parsing gives back the identical bits.
    pub fn to_json(&self) -> String {
        let mut s = String::with_capacity(64 * self.objects.len() + 32);
        s.push_str("{\"objects\":[");
        for (i, (name, o)) in self.objects.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("{\"name\":");
            s.push_str(&serde_json::to_string(&**name).expect("string serializes"));
            let _ = write!(s, ",\"type\":\"{}\",\"features\":[", o.ty);
            for (k, v) in o.features.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write_f64(&mut s, *v);
            }
            s.push_str("]}");
        }
        s.push_str("],\"held\":[");
        for (i, h) in self.held.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&serde_json::to_string(&**h).expect("string serializes"));
        }
        s.push_str("]}");
        s
    }

    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let raw: RawState = serde_json::from_str(text).map_err(|e| EnvError::Json(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, EnvError> {
        let raw = RawState::deserialize(v).map_err(|e| EnvError::Json(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawState) -> Result<Self, EnvError> {
        let mut st = SceneState::new();
        for o in raw.objects {
            let ty: ObjectType = o.ty.parse().map_err(EnvError::Json)?;
            if st.objects.contains_key(o.name.as_str()) {
                return Err(EnvError::InvalidState(format!("duplicate object `{}`", o.name)));
            }
            st.objects.insert(Arc::from(o.name.as_str()), ObjectState { ty, features: o.features });
        }
        for h in raw.held {
            let key = st.name_arc(&h).ok_or_else(|| EnvError::InvalidState(format!("held `{h}` missing")))?;
            st.held.push(key);
        }
        st.validate()?;
        Ok(st)
    }
}

/// Shortest exact form is not required; 17 significant digits always round-trip.
pub fn write_f64(s: &mut String, v: f64) {
    let _ = write!(s, "{v:.16e}");
}

#[derive(Deserialize)]
struct RawState {
    objects: Vec<RawObject>,
    #[serde(default)]
    held: Vec<String>,
}

#[derive(Deserialize)]
struct RawObject {
    name: String,
    #[serde(rename = "type")]
    ty: String,
    features: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_bit_exact() {
        let mut s = SceneState::new();
        s.insert("b", ObjectType::Button, vec![0.1 + 0.2, -0.0, 1e-300, 1.0, 0.0, 1.0 / 3.0, f64::MIN_POSITIVE, 7.0]);
        let t = SceneState::from_json(&s.to_json()).unwrap();
        for (a, b) in s.obj("b").features.iter().zip(&t.obj("b").features) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(t.to_json(), s.to_json());
    }

    #[test]
    fn rejects_wrong_length() {
        let txt = r#"{"objects":[{"name":"x","type":"button","features":[1.0]}],"held":[]}"#;
        assert!(matches!(SceneState::from_json(txt), Err(EnvError::InvalidState(_))));
    }
}
