//! Browser teleoperation: a line-delimited JSON protocol over WebSocket that
//! steps a live environment and records demonstrations.

pub mod protocol;
pub mod server;
pub mod session;

pub use protocol::{
    decode, encode, encode_client, ClientMsg, ErrorCode, Frame, ServerMsg, ShapeDesc, VacuumCmd, WIRE_VERSION,
};
pub use server::{handle_line, router, serve, serve_on, ServerConfig, DEFAULT_PORT};
pub use session::{shapes, Input, Session};
