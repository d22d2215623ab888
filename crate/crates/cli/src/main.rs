use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use kinder_core::baselines::{BilevelConfig, Cassette, Transport, MODEL_VAR};
use kinder_core::bench::{
    read_csv, render_table, run_matrix, summarize, write_csv, write_jsonl, Baseline, ClockKind, EpisodeResult,
    MatrixOptions, RunSpec,
};
use kinder_core::demos::{bp_planner, generate_dataset, verify_file, write_dataset};
use kinder_env::VariantSpec;
use kinder_teleop::{ServerConfig, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "kinder", version, about = "Kinematic 2D planning benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run baselines and summarize results.
    #[command(subcommand)]
    Bench(BenchCmd),
    /// Record, generate, and verify demonstrations.
    #[command(subcommand)]
    Demo(DemoCmd),
    /// Browser teleoperation server.
    #[command(subcommand)]
    Teleop(TeleopCmd),
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Run one baseline on one variant and write per-episode results.
    Run(RunArgs),
    /// Render the metric grid for a results CSV.
    Table {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    baseline: Baseline,
    #[arg(long)]
    variant: VariantSpec,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 50)]
    episodes: usize,
    #[arg(long, default_value_t = 500)]
    max_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    obs_noise: f64,
    #[arg(long, default_value_t = 0.0)]
    act_noise: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    jsonl: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Replay LLM responses from a recorded cassette instead of the live endpoint.
    #[arg(long)]
    cassette: Option<PathBuf>,
    /// Time planners with a fake clock advancing this many milliseconds per reading.
    #[arg(long)]
    fake_clock_ms: Option<u64>,
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Replay demo files and check their stored success flags.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Generate planner demonstrations.
    Generate {
        #[arg(long, default_value = "bp")]
        baseline: Baseline,
        #[arg(long)]
        variant: VariantSpec,
        #[arg(short = 'n', default_value_t = 100)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 500)]
        max_steps: usize,
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
    },
}

#[derive(Subcommand)]
enum TeleopCmd {
    /// Serve the WebSocket endpoint and the static client.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long)]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value = "demos")]
        demo_dir: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        tick_hz: f64,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Bench(BenchCmd::Run(args)) => bench_run(args),
        Command::Bench(BenchCmd::Table { input }) => bench_table(&input),
        Command::Demo(DemoCmd::Verify { paths }) => demo_verify(&paths),
        Command::Demo(DemoCmd::Generate { baseline, variant, n, out, max_steps, base_seed }) => {
            if baseline != Baseline::Bp {
                bail!("demo generation supports only the bp baseline, got {baseline}");
            }
            let planner = bp_planner(BilevelConfig::default());
            let (demos, stats) = generate_dataset(&planner, variant, n, base_seed, max_steps)?;
            let paths = write_dataset(&out, &demos)?;
            println!(
                "{} of {} episodes succeeded; wrote {} demos to {}",
                stats.successes,
                stats.attempts,
                paths.len(),
                out.display()
            );
            Ok(())
        }
        Command::Teleop(TeleopCmd::Serve { port, static_dir, demo_dir, tick_hz }) => {
            let cfg = ServerConfig { static_dir, demo_dir, tick_hz, ..ServerConfig::default() };
            tokio::runtime::Runtime::new()?.block_on(kinder_teleop::serve(port, cfg))?;
            Ok(())
        }
    }
}

fn bench_run(args: RunArgs) -> Result<()> {
    let spec = RunSpec {
        num_seeds: args.seeds,
        episodes_per_seed: args.episodes,
        max_steps: args.max_steps,
        obs_sigma: args.obs_noise,
        act_sigma: args.act_noise,
        base_seed: args.base_seed,
        ..RunSpec::new(args.baseline, args.variant)
    };
    let mut opts = MatrixOptions { workers: args.workers.max(1), ..MatrixOptions::default() };
    if let Ok(model) = std::env::var(MODEL_VAR) {
        opts.llm.model = model;
    }
    if let Some(ms) = args.fake_clock_ms {
        opts.clock = ClockKind::Fake(Duration::from_millis(ms));
    }
    if let Some(path) = args.cassette {
        let cassette = Cassette::load(&path).with_context(|| format!("loading cassette {}", path.display()))?;
        opts.transport = Arc::new(move |_| Ok(Box::new(cassette.clone()) as Box<dyn Transport>));
    }
    let records = run_matrix(&[spec], &opts)?;
    let results: Vec<EpisodeResult> = records.iter().map(|r| r.result.clone()).collect();
    write_csv(create(&args.out)?, &results)?;
    if let Some(path) = &args.jsonl {
        write_jsonl(create(path)?, &records)?;
    }
    print!("{}", render_table(&summarize(&results)));
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn bench_table(input: &Path) -> Result<()> {
    let file = File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let results = read_csv(BufReader::new(file))?;
    print!("{}", render_table(&summarize(&results)));
    Ok(())
}

fn demo_verify(paths: &[PathBuf]) -> Result<()> {
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for p in paths {
        match verify_file(p) {
            Ok(o) => writeln!(out, "ok {}: success={}", p.display(), o.success)?,
            Err(e) => {
                failed += 1;
                writeln!(out, "FAILED {}: {e}", p.display())?;
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} demos failed verification", paths.len());
    }
    Ok(())
}
