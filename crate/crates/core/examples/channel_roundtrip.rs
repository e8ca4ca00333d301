//! Draw a seeded channel, read off cascade gains, and round-trip it through JSON.
//!
//! ```bash
//! cargo run --release --example channel_roundtrip -- 4 7 40 11
//! ```
//! Arguments: antennas `L`, users `K`, RIS units `G`, seed.

use ris_caching::channel::{draw_channel, ChannelRealization};
use ris_caching::nulling::PhaseShiftVector;

fn arg(i: usize, default: u64) -> u64 {
    std::env::args().nth(i).and_then(|a| a.parse().ok()).unwrap_or(default)
}

fn main() -> ris_caching::error::Result<()> {
    let (l, k, g, seed) = (arg(1, 4) as usize, arg(2, 7) as usize, arg(3, 40) as usize, arg(4, 11));
    let ch = draw_channel(l, k, g, seed)?;
    let v = PhaseShiftVector::random(g, seed + 1);

    let h = ch.effective_channel(&v)?;
    println!("effective channel |a_kj^T v| ({k} users x {l} antennas):");
    for user in 0..k {
        let row: Vec<String> = (0..l).map(|j| format!("{:7.3}", h[(user, j)].norm())).collect();
        println!("  user {user}: {}", row.join(" "));
    }

    let path = std::env::temp_dir().join(format!("ris_channel_{seed}.json"));
    ch.save(&path)?;
    let back = ChannelRealization::load(&path)?;
    println!("saved to {} ({} bytes)", path.display(), std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0));
    println!("round trip exact: {}", back == ch);
    Ok(())
}
