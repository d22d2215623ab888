//! WebSocket endpoint: one session per connection, stepped at a fixed rate.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use kinder_env::VariantSpec;
use tokio::net::TcpListener;
use tokio::time::{interval, sleep_until, Instant, MissedTickBehavior};
use tower_http::services::ServeDir;

use crate::protocol::{decode, encode, ClientMsg, ErrorCode, ServerMsg};
use crate::session::Session;

pub const DEFAULT_PORT: u16 = 8753;

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub static_dir: Option<PathBuf>,
    pub demo_dir: PathBuf,
    pub tick_hz: f64,
    pub idle_timeout: Duration,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            static_dir: None,
            demo_dir: PathBuf::from("demos"),
            tick_hz: 20.0,
            idle_timeout: Duration::from_secs(60),
        }
    }
}

pub fn router(cfg: ServerConfig) -> Router {
    let static_dir = cfg.static_dir.clone();
    let app = Router::new().route("/ws", get(ws_handler)).with_state(Arc::new(cfg));
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Serves on an already bound listener until the task is dropped.
pub async fn serve_on(listener: TcpListener, cfg: ServerConfig) -> std::io::Result<()> {
    axum::serve(listener, router(cfg)).await
}

pub async fn serve(port: u16, cfg: ServerConfig) -> std::io::Result<()> {
    let listener = TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], port))).await?;
    log::info!("teleop listening on {}", listener.local_addr()?);
    serve_on(listener, cfg).await
}

async fn ws_handler(ws: WebSocketUpgrade, State(cfg): State<Arc<ServerConfig>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| run_socket(socket, cfg))
}

/// Processes one decoded client line, returning the replies.
pub fn handle_line(session: &mut Option<Session>, line: &str, cfg: &ServerConfig) -> Vec<ServerMsg> {
    let msg = match decode(line) {
        Ok(m) => m,
        Err((code, message)) => return vec![ServerMsg::error(code, message)],
    };
    match (&msg, session.as_mut()) {
        (ClientMsg::Create { variant, seed }, None) => {
            let v: VariantSpec = match variant.parse() {
                Ok(v) => v,
                Err(e) => return vec![ServerMsg::error(ErrorCode::BadVariant, e.to_string())],
            };
            let seed = seed.unwrap_or_else(rand::random);
            let id = format!("{:016x}", rand::random::<u64>());
            match Session::new(id, v, seed) {
                Ok(s) => {
                    let out = vec![
                        ServerMsg::Created { session_id: s.id.clone(), variant: v.to_string(), seed },
                        ServerMsg::Frame(s.frame()),
                    ];
                    *session = Some(s);
                    out
                }
                Err(e) => vec![ServerMsg::error(ErrorCode::BadVariant, e.to_string())],
            }
        }
        (ClientMsg::Create { .. }, Some(_)) => {
            vec![ServerMsg::error(ErrorCode::SessionExists, "this connection already has a session")]
        }
        (_, None) => vec![ServerMsg::error(ErrorCode::NoSession, "send `create` first")],
        (ClientMsg::Input { .. }, Some(s)) => {
            s.set_input(&msg);
            Vec::new()
        }
        (ClientMsg::Reset {}, Some(s)) => vec![ServerMsg::Frame(s.reset())],
        (ClientMsg::Save {}, Some(s)) => match s.save(&cfg.demo_dir) {
            Ok(p) => vec![ServerMsg::Saved { path: p.display().to_string() }],
            Err(e) => vec![ServerMsg::error(ErrorCode::SaveFailed, e.to_string())],
        },
    }
}

async fn send(tx: &mut futures_util::stream::SplitSink<WebSocket, Message>, msg: &ServerMsg) -> bool {
    let mut line = encode(msg);
    line.push('\n');
    tx.send(Message::Text(line.into())).await.is_ok()
}

async fn run_socket(socket: WebSocket, cfg: Arc<ServerConfig>) {
    let (mut tx, mut rx) = socket.split();
    let mut session: Option<Session> = None;
    let mut ticker = interval(Duration::from_secs_f64(1.0 / cfg.tick_hz));
    ticker.set_missed_tick_behavior(MissedTickBehavior::Delay);
    let mut deadline = Instant::now() + cfg.idle_timeout;
    loop {
        tokio::select! {
            incoming = rx.next() => {
                let text = match incoming {
                    Some(Ok(Message::Text(t))) => t,
                    Some(Ok(Message::Binary(_))) => {
                        if !send(&mut tx, &ServerMsg::error(ErrorCode::BadJson, "binary frames are not supported")).await {
                            break;
                        }
                        continue;
                    }
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                    Some(Ok(_)) => continue,
                };
                deadline = Instant::now() + cfg.idle_timeout;
                for line in text.lines().filter(|l| !l.trim().is_empty()) {
                    for reply in handle_line(&mut session, line, &cfg) {
                        if !send(&mut tx, &reply).await {
                            return;
                        }
                    }
                }
            }
            _ = ticker.tick(), if session.is_some() => {
                if let Some(frame) = session.as_mut().and_then(Session::tick) {
                    if !send(&mut tx, &ServerMsg::Frame(frame)).await {
                        break;
                    }
                }
            }
            _ = sleep_until(deadline) => {
                log::info!("closing idle teleop connection");
                break;
            }
        }
    }
}
