//! Node counts with and without the compression pre-step, under a node
//! budget so the uncompressed search stops early once it blows up.
//!
//!     cargo run --release --example baseline [mode] [k_max] [budget]

use seqprove::driver::{prove_quiet, ProveOptions};
use seqprove::search::{Mode, ModeConfig};

fn main() -> seqprove::Result<()> {
    let mut args = std::env::args().skip(1);
    let mode: Mode = args.next().as_deref().unwrap_or("general").parse()?;
    let k_max: usize = args.next().map_or(8, |s| s.parse().expect("k_max"));
    let budget: u64 = args.next().map_or(2_000_000, |s| s.parse().expect("budget"));

    println!("{:>3} {:>22} {:>22}", "k", "compressed", "uncompressed");
    for k in 3..=k_max {
        let mut cells = Vec::new();
        for compression in [true, false] {
            let mut config = ModeConfig::new(k, mode);
            config.node_budget = Some(budget);
            config.thread_count = std::thread::available_parallelism().map_or(1, usize::from);
            let opts = ProveOptions {
                compression,
                ..ProveOptions::new(config)
            };
            let r = prove_quiet(&opts)?;
            cells.push(format!("{} {}", r.node_count, r.verdict.as_str()));
        }
        println!("{k:>3} {:>22} {:>22}", cells[0], cells[1]);
    }
    Ok(())
}
