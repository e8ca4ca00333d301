use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use ris_caching::error::Result;
use ris_caching::experiment::{
    build, default_seed, grouping, nulling_bench, overlay_json, simulate, BuildConfig, GroupingConfig,
    NullingBenchConfig, SimulateConfig, SEED_ENV,
};

#[derive(Parser)]
#[command(name = "ris-cc", version, about = "RIS-assisted multi-antenna coded caching experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config; flags given on the command line override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Paired baseline/improved interference nulling trials.
    NullingBench(NullingBenchArgs),
    /// Optimal antenna grouping for a target sum-DoF.
    Grouping(GroupingArgs),
    /// Build and validate an RMAPDA, optionally writing it as JSON.
    BuildRmapda(BuildArgs),
    /// Simulate delivery over a stored RMAPDA.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct NullingBenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    units: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, help = format!("Base seed [default: ${SEED_ENV} or 0]"))]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    threshold_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    target_db: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GroupingArgs {
    #[command(flatten)]
    common: Common,
    /// Transmit antennas L.
    #[arg(long, short = 'L')]
    antennas: Option<u64>,
    #[arg(long, short = 't')]
    t: Option<u64>,
    /// Target sum-DoF.
    #[arg(long, short = 'g')]
    g: Option<u64>,
    /// Cross-check against exhaustive search.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    common: Common,
    /// Users K.
    #[arg(long, short = 'K')]
    users: Option<usize>,
    #[arg(long, short = 't')]
    t: Option<usize>,
    /// Active antennas L0.
    #[arg(long = "l0", visible_alias = "L0")]
    l0: Option<usize>,
    /// Number of antenna groups.
    #[arg(long, short = 'r')]
    r: Option<usize>,
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    array: Option<PathBuf>,
    #[arg(long, help = format!("Channel seed [default: ${SEED_ENV} or 0]"))]
    channel_seed: Option<u64>,
    #[arg(long)]
    units: Option<usize>,
    #[arg(long)]
    antennas: Option<usize>,
    #[arg(long)]
    files: Option<usize>,
    /// Requested file per user, comma separated.
    #[arg(long, value_delimiter = ',')]
    demand: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    margin: Option<f64>,
    /// Seed for the nulling start points.
    #[arg(long, help = format!("Nulling seed [default: ${SEED_ENV} or 0]"))]
    seed: Option<u64>,
    #[arg(long)]
    warm_start: bool,
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn load<T: Serialize + DeserializeOwned>(base: T, common: &Common) -> Result<T> {
    match &common.config {
        Some(path) => overlay_json(base, path),
        None => Ok(base),
    }
}

fn print<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let seed = default_seed();
    match cli.command {
        Command::NullingBench(a) => {
            let mut cfg = load(NullingBenchConfig { seed, ..Default::default() }, &a.common)?;
            set(&mut cfg.users, a.users);
            set(&mut cfg.units, a.units);
            set(&mut cfg.iterations, a.iterations);
            set(&mut cfg.trials, a.trials);
            set(&mut cfg.seed, a.seed);
            set(&mut cfg.tolerance, a.tolerance);
            set(&mut cfg.threshold_db, a.threshold_db);
            set(&mut cfg.target_db, a.target_db);
            if a.out_dir.is_some() {
                cfg.out_dir = a.out_dir;
            }
            let summary = nulling_bench(&cfg)?;
            // the per-trial detail lives in summary.json when out_dir is set
            print(&serde_json::json!({
                "config": summary.config,
                "paths": summary.paths,
                "baseline": summary.baseline,
                "improved": summary.improved,
                "improved_not_worse": summary.improved_not_worse,
            }))?;
            Ok(summary.failures() == 0)
        }
        Command::Grouping(a) => {
            let mut cfg = load(GroupingConfig::default(), &a.common)?;
            set(&mut cfg.antennas, a.antennas);
            set(&mut cfg.t, a.t);
            set(&mut cfg.g, a.g);
            cfg.verify |= a.verify;
            let out = grouping(&cfg)?;
            print(&out)?;
            Ok(out.verified != Some(false))
        }
        Command::BuildRmapda(a) => {
            let mut cfg = load(BuildConfig::default(), &a.common)?;
            set(&mut cfg.users, a.users);
            set(&mut cfg.t, a.t);
            set(&mut cfg.l0, a.l0);
            set(&mut cfg.r, a.r);
            if a.out.is_some() {
                cfg.out = a.out;
            }
            let out = build(&cfg)?;
            print(&out)?;
            Ok(out.valid)
        }
        Command::Simulate(a) => {
            let mut cfg = SimulateConfig {
                channel_seed: seed,
                ..Default::default()
            };
            cfg.delivery.seed = seed;
            let mut cfg = load(cfg, &a.common)?;
            set(&mut cfg.array, a.array);
            set(&mut cfg.channel_seed, a.channel_seed);
            let d = &mut cfg.delivery;
            set(&mut d.tolerance, a.tolerance);
            set(&mut d.max_iterations, a.max_iterations);
            set(&mut d.restarts, a.restarts);
            set(&mut d.margin, a.margin);
            set(&mut d.seed, a.seed);
            d.warm_start |= a.warm_start;
            if a.snr_db.is_some() {
                d.snr_db = a.snr_db;
            }
            for (slot, value) in [(&mut cfg.units, a.units), (&mut cfg.antennas, a.antennas), (&mut cfg.files, a.files)] {
                if value.is_some() {
                    *slot = value;
                }
            }
            if a.demand.is_some() {
                cfg.demand = a.demand;
            }
            if a.out.is_some() {
                cfg.out = a.out;
            }
            let report = simulate(&cfg)?;
            print(&report)?;
            Ok(report.all_decoded())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
