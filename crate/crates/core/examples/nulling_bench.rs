//! Paired comparison of the baseline and improved alternating projections.
//!
//! Every trial draws a `K`-user interference channel, fixes a random start
//! point and runs both algorithms for the full iteration budget. Traces go
//! to CSV when an output directory is given.
//!
//! ```bash
//! cargo run --release --example nulling_bench -- 20 /tmp/nulling
//! ```
//! Arguments: number of trials (default 10), optional output directory.

use std::path::PathBuf;

use ris_caching::experiment::{nulling_bench, NullingBenchConfig};

fn main() -> ris_caching::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let cfg = NullingBenchConfig {
        trials,
        out_dir: args.next().map(PathBuf::from),
        ..Default::default()
    };
    println!(
        "K = {}, G = {}, {} iterations, {} trials",
        cfg.users, cfg.units, cfg.iterations, cfg.trials
    );
    let summary = nulling_bench(&cfg)?;

    println!("{:>5} {:>12} {:>12} {:>8} {:>8}", "trial", "baseline dB", "improved dB", "it@-60", "it@-60");
    for t in &summary.trials {
        let hit = |h: Option<usize>| h.map_or("-".to_string(), |i| i.to_string());
        println!(
            "{:>5} {:>12.1} {:>12.1} {:>8} {:>8}",
            t.trial,
            t.baseline.final_db,
            t.improved.final_db,
            hit(t.baseline.iterations_to_threshold),
            hit(t.improved.iterations_to_threshold)
        );
    }
    println!(
        "median iterations to {} dB: baseline {:?}, improved {:?}",
        cfg.threshold_db, summary.baseline.median_iterations_to_threshold, summary.improved.median_iterations_to_threshold
    );
    println!(
        "improved at or below baseline in {}/{} trials; reached {} dB in {}/{}",
        summary.improved_not_worse,
        cfg.trials,
        cfg.target_db,
        summary.improved.reached_target,
        cfg.trials
    );
    if let Some(dir) = &cfg.out_dir {
        println!("traces and summary.json written to {}", dir.display());
    }
    Ok(())
}
