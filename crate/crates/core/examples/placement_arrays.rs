//! Print the single-antenna and multi-antenna placement delivery arrays.
//!
//! Slot ids are shown as the user sets they serve, which is how the arrays
//! are usually tabulated.
//!
//! ```bash
//! cargo run --example placement_arrays -- 7 1 2
//! ```
//! Arguments: users `K`, `t`, antennas `L1` of the multi-antenna array.

use ris_caching::pda::{k_subsets, mn_pda, ms_mapda, validate_mapda, validate_pda, CacheArray, Cell};

fn show(arr: &CacheArray, label: impl Fn(usize) -> String) {
    for f in 0..arr.rows() {
        let row: Vec<String> = arr
            .row(f)
            .iter()
            .map(|c| match c {
                Cell::Star => "*".to_string(),
                Cell::Slot(s) => label(*s),
            })
            .collect();
        println!("  {:>3} | {}", f + 1, row.iter().map(|s| format!("{s:>5}")).collect::<String>());
    }
}

fn users(set: &[usize]) -> String {
    set.iter().map(|u| (u + 1).to_string()).collect()
}

fn main() -> ris_caching::error::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let (k, t, l1) = (args.next().unwrap_or(7), args.next().unwrap_or(1), args.next().unwrap_or(2));

    let mn = mn_pda(k, t)?;
    let pairs = k_subsets(k, t + 1);
    println!("MN PDA: F = {}, Z = {}, S = {}", mn.rows(), mn.z(), mn.num_slots());
    show(&mn, |s| users(&pairs[s - 1]));
    println!("  {}", validate_pda(&mn));

    let ms = ms_mapda(k, t, l1)?;
    let sets = k_subsets(k, t + l1);
    let per_set = ms.num_slots() / sets.len();
    println!("\nMS MAPDA with {l1} antennas: F = {}, Z = {}, S = {}", ms.rows(), ms.z(), ms.num_slots());
    show(&ms, |s| users(&sets[(s - 1) / per_set]));
    println!("  {}", validate_mapda(&ms, l1));
    Ok(())
}
