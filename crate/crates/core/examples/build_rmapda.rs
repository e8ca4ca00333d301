//! Build an RMAPDA, inspect its slot groups, and store it as JSON.
//!
//! The default parameters (`K = 7`, `t = 1`, `L0 = 4`, `r = 3`) give a
//! 245-row array with 210 slots, each serving a 3-user group on two
//! antennas and two 2-user groups on one antenna each.
//!
//! ```bash
//! cargo run --release --example build_rmapda -- 7 1 4 3 /tmp/rmapda.json
//! ```

use std::path::PathBuf;

use ris_caching::pda::{build_rmapda, degree_identity, ArrayFile, Cell};

fn main() -> ris_caching::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: usize| args.get(i).and_then(|a| a.parse().ok()).unwrap_or(d);
    let (k, t, l0, r) = (num(0, 7), num(1, 1), num(2, 4), num(3, 3));
    let out = args
        .get(4)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("rmapda.json"));

    let rm = build_rmapda(k, t, l0, r)?;
    let arr = &rm.array;
    println!(
        "K = {} ({} real), F = {}, Z = {}, S = {}, users per slot = {}",
        arr.cols(),
        arr.real_users(),
        arr.rows(),
        arr.z(),
        arr.num_slots(),
        rm.sum_dof()
    );
    if let Some(c) = rm.counts {
        println!("replication: n1 = {}, n2 = {}, m = {}", c.n1, c.n2, c.m);
        let p = arr.params();
        let d = degree_identity(arr.cols() as u64, t as u64, p.l1 as u64, r as u64)?;
        println!("pairing degrees: {} = {} ({})", d.d_x, d.d_y, if d.holds() { "balanced" } else { "UNBALANCED" });
    }

    println!("first slots:");
    for sg in rm.groups.iter().take(6) {
        let groups: Vec<String> = sg
            .groups()
            .map(|g| format!("{:?} on {:?}", g.users, g.antennas))
            .collect();
        println!("  slot {:>3}: {}", sg.slot, groups.join(" | "));
    }

    let report = rm.validate();
    println!("validation: {report}");

    // corrupt one star and validate again
    let mut broken = rm.clone();
    let f = (0..broken.array.rows()).find(|&f| broken.array.get(f, 0).is_star()).unwrap();
    broken.array.set(f, 0, Cell::Slot(1));
    println!("after overwriting a star in column 0: {} violation(s)", broken.validate().violations.len());

    ArrayFile::from_rmapda(&rm).save(&out)?;
    println!("written to {}", out.display());
    Ok(())
}
