//! Wire schema, version 1: one JSON object per line, each carrying `"v": 1`
//! and a `"type"` tag.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

pub const WIRE_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VacuumCmd {
    On,
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMsg {
    Create {
        variant: String,
        #[serde(default)]
        seed: Option<u64>,
    },
    Input {
        axes: [f64; 3],
        #[serde(default)]
        arm: i8,
        #[serde(default)]
        vacuum: Option<VacuumCmd>,
    },
    Reset {},
    Save {},
}

const CLIENT_TYPES: [&str; 4] = ["create", "input", "reset", "save"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadJson,
    BadVersion,
    UnknownType,
    BadMessage,
    BadVariant,
    NoSession,
    SessionExists,
    SaveFailed,
}

/// Client-side drawing hint for one object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeDesc {
    pub name: String,
    /// `circle`, `rect`, or `compound`.
    pub kind: String,
    /// `[radius]` or `[half_w, half_h]`; empty for compounds.
    pub dims: Vec<f64>,
    pub color: [f64; 3],
    /// World pose `[x, y, theta]`.
    pub pose: [f64; 3],
    /// Local-frame parts of a compound.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<ShapeDesc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Frame {
    pub tick: u64,
    /// Canonical scene JSON, embedded verbatim.
    pub scene: Box<RawValue>,
    pub shapes: Vec<ShapeDesc>,
    pub reward: f64,
    pub done: bool,
    pub steps: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMsg {
    Frame(Frame),
    Created { session_id: String, variant: String, seed: u64 },
    Saved { path: String },
    Error { code: ErrorCode, message: String },
}

impl ServerMsg {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        ServerMsg::Error { code, message: message.into() }
    }
}

/// Serializes `msg` as one line (without the newline) with the version field first.
pub fn encode(msg: &ServerMsg) -> String {
    let body = serde_json::to_string(msg).expect("server messages serialize");
    format!("{{\"v\":{WIRE_VERSION},{}", &body[1..])
}

pub fn encode_client(msg: &ClientMsg) -> String {
    let body = serde_json::to_string(msg).expect("client messages serialize");
    format!("{{\"v\":{WIRE_VERSION},{}", &body[1..])
}

/// Parses one client line; failures carry the error code to send back.
pub fn decode(line: &str) -> Result<ClientMsg, (ErrorCode, String)> {
    let v: Value = serde_json::from_str(line).map_err(|e| (ErrorCode::BadJson, e.to_string()))?;
    let obj = v.as_object().ok_or((ErrorCode::BadJson, "message is not an object".to_string()))?;
    match obj.get("v").and_then(Value::as_u64) {
        Some(WIRE_VERSION) => {}
        other => return Err((ErrorCode::BadVersion, format!("expected v = {WIRE_VERSION}, got {other:?}"))),
    }
    let ty = obj.get("type").and_then(Value::as_str).unwrap_or("");
    if !CLIENT_TYPES.contains(&ty) {
        return Err((ErrorCode::UnknownType, format!("unknown message type `{ty}`")));
    }
    let msg: ClientMsg = serde_json::from_value(v.clone()).map_err(|e| (ErrorCode::BadMessage, e.to_string()))?;
    if let ClientMsg::Input { axes, arm, .. } = &msg {
        if !axes.iter().all(|a| a.is_finite()) {
            return Err((ErrorCode::BadMessage, "axes must be finite".into()));
        }
        if !(-1..=1).contains(arm) {
            return Err((ErrorCode::BadMessage, format!("arm must be -1, 0, or 1, got {arm}")));
        }
    }
    Ok(msg)
}
