//! General-mode proof, one section per merge scenario.
//!
//!     cargo run --release --example general_proof [k]

use seqprove::driver::{prove_quiet, ProveOptions};
use seqprove::search::{Mode, ModeConfig};

fn main() -> seqprove::Result<()> {
    let k: usize = std::env::args().nth(1).map_or(8, |s| s.parse().expect("k"));
    let mut config = ModeConfig::new(k, Mode::General);
    config.thread_count = std::thread::available_parallelism().map_or(1, usize::from);

    let report = prove_quiet(&ProveOptions::new(config))?;
    for s in &report.sections {
        println!(
            "merge into x_{}: {} with {} nodes, depth {}",
            s.merge_index.unwrap_or(0),
            s.verdict.as_str(),
            s.node_count,
            s.max_depth
        );
    }
    println!("general k = {k}: {} ({} nodes)", report.verdict.as_str(), report.node_count);
    Ok(())
}
