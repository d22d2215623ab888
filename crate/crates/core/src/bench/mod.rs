//! Evaluation harness: episode matrices, metrics, noise wrappers, and result files.

mod clock;
mod metrics;
mod noise;
mod output;
mod run;

use thiserror::Error;

pub use clock::{Clock, ClockKind, FakeClock, Stopwatch, WallClock};
pub use metrics::{compute_metrics, format_rwd, render_table, summarize, MetricRow};
pub use noise::{wrap_act_noise, wrap_obs_noise, NoisyEnv};
pub use output::{read_csv, read_jsonl, write_csv, write_jsonl};
pub use run::{
    env_transport_factory, episode_seed, fnv64, run_episode, run_matrix, Baseline, EpisodeRecord, EpisodeResult,
    FailureKind, MatrixOptions, RunSpec, TransportFactory,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no results to summarize")]
    Empty,
    #[error("unknown baseline `{0}` (expected bp, mpc, llm, or llm-con)")]
    UnknownBaseline(String),
    #[error("invalid run spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
