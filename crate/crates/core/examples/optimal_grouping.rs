//! Cheapest antenna grouping for every reachable sum-DoF.
//!
//! For `L` antennas and caching gain `t`, prints the grouping chosen for
//! each target `g` and checks it against an exhaustive search over all
//! partitions of the active antennas.
//!
//! ```bash
//! cargo run --release --example optimal_grouping -- 6 2
//! ```

use ris_caching::grouping::{brute_force_grouping, optimal_grouping};

fn main() -> ris_caching::error::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let antennas = args.next().unwrap_or(4);
    let t = args.next().unwrap_or(1);

    println!("L = {antennas}, t = {t}");
    println!("{:>4} {:>4} {:>4} {:>4} {:>6}  {:<16} {}", "g", "got", "L0", "r", "G", "groups", "exhaustive");
    for g in (t + 1)..=antennas * (t + 1) {
        let sol = optimal_grouping(antennas, t, g)?;
        let oracle = brute_force_grouping(antennas, t, g)?;
        let agree = (sol.g_opt, sol.g_achieved) == (oracle.g_opt, oracle.g_achieved);
        println!(
            "{:>4} {:>4} {:>4} {:>4} {:>6}  {:<16} {}",
            g,
            sol.g_achieved,
            sol.l_opt,
            sol.r_opt,
            sol.g_opt,
            format!("{:?}", sol.star_sizes),
            if agree { "agrees" } else { "DIFFERS" }
        );
    }
    Ok(())
}
