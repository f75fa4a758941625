//! Proves the zero-sum case for one k under the default options and writes
//! a gzip transcript that `verify_transcript` can check.
//!
//!     cargo run --release --example zero_sum_proof [k] [out.jsonl.gz]

use std::path::PathBuf;

use seqprove::driver::{prove_all, ProveOptions};
use seqprove::search::{Mode, ModeConfig};
use seqprove::transcript::{create_sink, TranscriptWriter};

fn main() -> seqprove::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(10, |s| s.parse().expect("k"));
    let out = args
        .next()
        .map_or_else(|| std::env::temp_dir().join(format!("zero_sum_k{k}.jsonl.gz")), PathBuf::from);

    let mut config = ModeConfig::new(k, Mode::ZeroSum);
    config.thread_count = std::thread::available_parallelism().map_or(1, usize::from);
    let opts = ProveOptions::new(config);

    let mut writer = TranscriptWriter::new(create_sink(&out)?);
    let report = prove_all(&opts, Some(&mut writer), &mut |p| {
        eprintln!("depth {} frontier {} nodes {}", p.level.depth, p.level.frontier, p.level.nodes);
    })?;
    writer.finish()?.flush()?;

    println!(
        "zero-sum k = {k}: {} ({} nodes, depth {})",
        report.verdict.as_str(),
        report.node_count,
        report.max_depth
    );
    println!("transcript: {}", out.display());
    Ok(())
}
