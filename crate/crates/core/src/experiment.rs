//! Reproducible experiment runners behind the `ris-cc` command line.
//!
//! Each runner takes a serializable config and returns a serializable
//! result. Configs can be loaded from JSON and then overridden field by
//! field, so a run is fully described by its config and the crate version.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::channel::draw_channel;
use crate::delivery::{required_units, simulate_delivery, DemandVector, SimulationConfig, SimulationReport};
use crate::error::{Error, Result};
use crate::grouping::{brute_force_grouping, optimal_grouping, GroupingSolution};
use crate::nulling::{build_path_matrix, solve, Algorithm, ConvergenceTrace, PathSet, PhaseShiftVector};
use crate::pda::{build_rmapda, ArrayFile, ValidationReport};

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "RIS_CC_SEED";

/// Seed from [`SEED_ENV`], or 0 when unset or unparsable.
pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Overlays the top-level keys of the JSON object in `path` onto `base`.
pub fn overlay_json<T: Serialize + DeserializeOwned>(base: T, path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    overlay_json_str(base, &text)
}

pub fn overlay_json_str<T: Serialize + DeserializeOwned>(base: T, text: &str) -> Result<T> {
    let mut merged = serde_json::to_value(base)?;
    let patch: serde_json::Value = serde_json::from_str(text)?;
    let (Some(dst), serde_json::Value::Object(src)) = (merged.as_object_mut(), patch) else {
        return Err(Error::Parse("config file must hold a JSON object".into()));
    };
    for (key, value) in src {
        if !dst.contains_key(&key) {
            return Err(Error::Parse(format!("unknown config key `{key}`")));
        }
        dst.insert(key, value);
    }
    Ok(serde_json::from_value(merged)?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------- nulling

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullingBenchConfig {
    /// Users (and transmit antennas) of the `K`-user interference channel.
    pub users: usize,
    /// RIS units `G`.
    pub units: usize,
    pub iterations: usize,
    pub trials: usize,
    pub seed: u64,
    /// Early-stop threshold on linear interference power; 0 runs every
    /// iteration so both algorithms are compared over the same horizon.
    pub tolerance: f64,
    /// Level used for the iterations-to-threshold statistic.
    pub threshold_db: f64,
    /// Level a trial must reach to count as converged.
    pub target_db: f64,
    /// Directory for per-trial CSV traces and `summary.json`.
    pub out_dir: Option<PathBuf>,
}

impl Default for NullingBenchConfig {
    fn default() -> Self {
        Self {
            users: 10,
            units: 300,
            iterations: 500,
            trials: 100,
            seed: 0,
            tolerance: 0.0,
            threshold_db: -60.0,
            target_db: -100.0,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRun {
    pub final_db: f64,
    pub iterations_to_threshold: Option<usize>,
    pub reached_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullingTrial {
    pub trial: usize,
    pub channel_seed: u64,
    pub phase_seed: u64,
    pub baseline: AlgorithmRun,
    pub improved: AlgorithmRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub reached_target: usize,
    pub median_final_db: f64,
    /// `None` when fewer than half the trials reached the threshold.
    pub median_iterations_to_threshold: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullingBenchSummary {
    pub config: NullingBenchConfig,
    pub paths: usize,
    pub baseline: AlgorithmSummary,
    pub improved: AlgorithmSummary,
    /// Trials where the improved final level is at or below the baseline's.
    pub improved_not_worse: usize,
    pub trials: Vec<NullingTrial>,
}

impl NullingBenchSummary {
    /// Trials where the improved algorithm missed the target level.
    pub fn failures(&self) -> usize {
        self.trials.len() - self.improved.reached_target
    }
}

fn median<T: Copy + PartialOrd>(mut xs: Vec<T>) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    Some(xs[(xs.len() - 1) / 2])
}

/// Lower median of iterations-to-threshold, with misses counted as +∞.
fn median_hits(hits: &[Option<usize>]) -> Option<usize> {
    let mut keyed: Vec<usize> = hits.iter().map(|h| h.unwrap_or(usize::MAX)).collect();
    keyed.sort_unstable();
    keyed.get((keyed.len().max(1) - 1) / 2).copied().filter(|&v| v != usize::MAX)
}

fn summarize(runs: &[&AlgorithmRun]) -> AlgorithmSummary {
    AlgorithmSummary {
        reached_target: runs.iter().filter(|r| r.reached_target).count(),
        median_final_db: median(runs.iter().map(|r| r.final_db).collect()).unwrap_or(f64::NAN),
        median_iterations_to_threshold: median_hits(&runs.iter().map(|r| r.iterations_to_threshold).collect::<Vec<_>>()),
    }
}

/// Seeds of trial `i`: channel `seed + i`, initial phases offset by 2³².
pub fn trial_seeds(seed: u64, trial: usize) -> (u64, u64) {
    let channel = seed.wrapping_add(trial as u64);
    (channel, channel.wrapping_add(1 << 32))
}

/// One paired trial: both algorithms on the same channel and start point.
pub fn nulling_trial(cfg: &NullingBenchConfig, trial: usize) -> Result<(NullingTrial, ConvergenceTrace, ConvergenceTrace)> {
    let (channel_seed, phase_seed) = trial_seeds(cfg.seed, trial);
    let ch = draw_channel(cfg.users, cfg.users, cfg.units, channel_seed)?;
    let paths = PathSet::interference_channel(cfg.users);
    let prob = build_path_matrix(&ch, &paths)?
        .with_tolerance(cfg.tolerance)
        .with_max_iterations(cfg.iterations);
    let v0 = PhaseShiftVector::random(cfg.units, phase_seed);
    let run = |alg| -> Result<(AlgorithmRun, ConvergenceTrace)> {
        let (_, trace) = solve(&prob, &v0, alg)?;
        let run = AlgorithmRun {
            final_db: trace.final_db(),
            iterations_to_threshold: trace.iterations_to_reach(cfg.threshold_db),
            reached_target: trace.final_db() <= cfg.target_db,
        };
        Ok((run, trace))
    };
    let (baseline, tb) = run(Algorithm::Baseline)?;
    let (improved, ti) = run(Algorithm::Improved)?;
    let t = NullingTrial {
        trial,
        channel_seed,
        phase_seed,
        baseline,
        improved,
    };
    Ok((t, tb, ti))
}

/// Paired baseline/improved trials. Writes `trial_NNN_{baseline,improved}.csv`
/// and `summary.json` when `out_dir` is set.
pub fn nulling_bench(cfg: &NullingBenchConfig) -> Result<NullingBenchSummary> {
    if cfg.users == 0 || cfg.units == 0 || cfg.trials == 0 {
        return Err(Error::InvalidParameter("users, units and trials must be positive".into()));
    }
    let results: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| nulling_trial(cfg, i))
        .collect::<Result<_>>()?;
    if let Some(dir) = &cfg.out_dir {
        for (t, tb, ti) in &results {
            write_text(&dir.join(format!("trial_{:03}_baseline.csv", t.trial)), &tb.to_csv())?;
            write_text(&dir.join(format!("trial_{:03}_improved.csv", t.trial)), &ti.to_csv())?;
        }
    }
    let trials: Vec<NullingTrial> = results.into_iter().map(|(t, _, _)| t).collect();
    let summary = NullingBenchSummary {
        config: cfg.clone(),
        paths: cfg.users * (cfg.users - 1),
        baseline: summarize(&trials.iter().map(|t| &t.baseline).collect::<Vec<_>>()),
        improved: summarize(&trials.iter().map(|t| &t.improved).collect::<Vec<_>>()),
        improved_not_worse: trials.iter().filter(|t| t.improved.final_db <= t.baseline.final_db).count(),
        trials,
    };
    if let Some(dir) = &cfg.out_dir {
        write_text(&dir.join("summary.json"), &serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(summary)
}

// --------------------------------------------------------------- grouping

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingConfig {
    pub antennas: u64,
    pub t: u64,
    pub g: u64,
    /// Cross-check against exhaustive partition search.
    pub verify: bool,
}

impl Default for GroupingConfig {
    fn default() -> Self {
        Self {
            antennas: 4,
            t: 1,
            g: 7,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingOutput {
    #[serde(flatten)]
    pub solution: GroupingSolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<GroupingSolution>,
    /// `Some(true)` when both searches agree on `(G_opt, g_achieved)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

pub fn grouping(cfg: &GroupingConfig) -> Result<GroupingOutput> {
    let solution = optimal_grouping(cfg.antennas, cfg.t, cfg.g)?;
    let brute_force = if cfg.verify {
        Some(brute_force_grouping(cfg.antennas, cfg.t, cfg.g)?)
    } else {
        None
    };
    let verified = brute_force
        .as_ref()
        .map(|b| (b.g_opt, b.g_achieved) == (solution.g_opt, solution.g_achieved));
    Ok(GroupingOutput {
        solution,
        brute_force,
        verified,
    })
}

// ------------------------------------------------------------------ build

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub users: usize,
    pub t: usize,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub r: usize,
    /// Where to write the array JSON.
    pub out: Option<PathBuf>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            users: 7,
            t: 1,
            l0: 4,
            r: 3,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildOutput {
    #[serde(rename = "K")]
    pub k: usize,
    pub real_users: usize,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    pub g: usize,
    pub n1: Option<u128>,
    pub n2: Option<u128>,
    pub m: Option<u128>,
    pub valid: bool,
    pub validation: ValidationReport,
    pub out: Option<PathBuf>,
}

pub fn build(cfg: &BuildConfig) -> Result<BuildOutput> {
    let rm = build_rmapda(cfg.users, cfg.t, cfg.l0, cfg.r)?;
    let validation = rm.validate();
    if let Some(path) = &cfg.out {
        write_text(path, &ArrayFile::from_rmapda(&rm).to_json()?)?;
    }
    let arr = &rm.array;
    Ok(BuildOutput {
        k: arr.cols(),
        real_users: arr.real_users(),
        f: arr.rows(),
        s: arr.num_slots(),
        z: arr.z(),
        g: rm.sum_dof(),
        n1: rm.counts.map(|c| c.n1),
        n2: rm.counts.map(|c| c.n2),
        m: rm.counts.map(|c| c.m),
        valid: validation.is_ok(),
        validation,
        out: cfg.out.clone(),
    })
}

// --------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    /// Array JSON written by `build-rmapda`.
    pub array: PathBuf,
    pub channel_seed: u64,
    /// RIS units; defaults to `⌈2·p·margin⌉` for the busiest slot.
    pub units: Option<usize>,
    /// Transmit antennas; defaults to `L0`.
    pub antennas: Option<usize>,
    /// Files `N`; defaults to the number of real users.
    pub files: Option<usize>,
    /// Requested file per user; defaults to user `k` requesting file `k`.
    pub demand: Option<Vec<usize>>,
    #[serde(flatten)]
    pub delivery: SimulationConfig,
    pub out: Option<PathBuf>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            array: PathBuf::from("array.json"),
            channel_seed: 0,
            units: None,
            antennas: None,
            files: None,
            demand: None,
            delivery: SimulationConfig::default(),
            out: None,
        }
    }
}

pub fn simulate(cfg: &SimulateConfig) -> Result<SimulationReport> {
    let rm = ArrayFile::load(&cfg.array)?.to_rmapda()?;
    let report = rm.validate();
    if !report.is_ok() {
        return Err(Error::Parse(format!("{}: array fails validation: {report}", cfg.array.display())));
    }
    let real = rm.array.real_users();
    let units = cfg.units.unwrap_or_else(|| required_units(&rm, cfg.delivery.margin).max(1));
    let antennas = cfg.antennas.unwrap_or(rm.array.params().l0);
    let files = cfg.files.unwrap_or(real);
    let demand = match &cfg.demand {
        Some(d) => DemandVector::new(d.clone(), files)?,
        None => DemandVector::all_distinct(real, files.max(real))?,
    };
    let ch = draw_channel(antennas, real, units, cfg.channel_seed)?;
    let out = simulate_delivery(&rm, &ch, &demand, &cfg.delivery)?;
    if let Some(path) = &cfg.out {
        write_text(path, &out.to_json()?)?;
    }
    Ok(out)
}
