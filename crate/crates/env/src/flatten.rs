use std::sync::Arc;

use crate::error::EnvError;
use crate::schema::ObjectType;
use crate::state::{ObjectState, SceneState, ROBOT};
use crate::variant::{EnvId, VariantSpec};

/// Ordered (name, type) list of the non-robot objects in a flat vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub objects: Vec<(Arc<str>, ObjectType)>,
}

impl Layout {
    /// Every non-robot object of `state`, in state order.
    pub fn of_state(state: &SceneState) -> Self {
        Layout {
            objects: state.objects.iter().filter(|(n, _)| &***n != ROBOT).map(|(n, o)| (n.clone(), o.ty)).collect(),
        }
    }

    /// Only the objects the variant's count parameter counts.
    pub fn counted(state: &SceneState, variant: &VariantSpec) -> Self {
        let keep = |n: &str, ty: ObjectType| match variant.env {
            EnvId::Motion2D => n.starts_with("passage"),
            EnvId::Obstruction2D | EnvId::ClutteredRetrieval2D => n.starts_with("obstruction"),
            EnvId::ClutteredStorage2D => ty == ObjectType::Block,
            EnvId::PushPullHook2D => n == "movable_button",
            EnvId::StickButton2D => ty == ObjectType::Button,
        };
        Layout {
            objects: state.objects.iter().filter(|(n, o)| keep(n, o.ty)).map(|(n, o)| (n.clone(), o.ty)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        ObjectType::Robot.dim() + self.objects.iter().map(|(_, t)| t.dim()).sum::<usize>()
    }
}

/// Robot features followed by each layout object's features.
pub fn flatten(state: &SceneState, layout: &Layout) -> Result<Vec<f64>, EnvError> {
    let robot = state.get(ROBOT).ok_or_else(|| EnvError::LayoutMismatch("state has no robot".into()))?;
    let mut out = Vec::with_capacity(layout.dim());
    out.extend_from_slice(&robot.features);
    for (name, ty) in &layout.objects {
        let o = state.get(name).ok_or_else(|| EnvError::LayoutMismatch(format!("object `{name}` missing")))?;
        if o.ty != *ty {
            return Err(EnvError::LayoutMismatch(format!("`{name}` is a {}, layout says {ty}", o.ty)));
        }
        out.extend_from_slice(&o.features);
    }
    Ok(out)
}

/// Inverse of [`flatten`]. Held objects are recovered from their `is_held` flags.
pub fn unflatten(v: &[f64], layout: &Layout) -> Result<SceneState, EnvError> {
    if v.len() != layout.dim() {
        return Err(EnvError::LayoutMismatch(format!("vector has {} entries, layout needs {}", v.len(), layout.dim())));
    }
    let mut s = SceneState::new();
    let rd = ObjectType::Robot.dim();
    s.objects.insert(Arc::from(ROBOT), ObjectState::new(ObjectType::Robot, v[..rd].to_vec()));
    let mut at = rd;
    for (name, ty) in &layout.objects {
        let o = ObjectState::new(*ty, v[at..at + ty.dim()].to_vec());
        at += ty.dim();
        if o.is_held() {
            s.held.push(name.clone());
        }
        s.objects.insert(name.clone(), o);
    }
    Ok(s)
}
