//! The smallest search tree: k = 3, general mode, no compression. Prints
//! every node with its recorded rows and certificate.
//!
//!     cargo run --example worked_example

use seqprove::compression::InitialCons;
use seqprove::search::{bfs_prove, Mode, ModeConfig};
use seqprove::transcript::{NodeStatus, TranscriptRecord};

fn main() -> seqprove::Result<()> {
    let config = ModeConfig::new(3, Mode::General);
    let mut records: Vec<TranscriptRecord> = Vec::new();
    let result = bfs_prove(&config, &InitialCons::empty(3), &[], &mut records)?;

    for r in &records {
        let indent = "  ".repeat(r.depth);
        let via = match (r.interval, &r.row) {
            (Some([i, j]), Some(row)) => format!(" via ({i},{j}) row {row:?}"),
            _ => String::new(),
        };
        let status = match &r.status {
            NodeStatus::Certified { certificate, labels, multipliers, denominator, .. } => {
                format!("{certificate} {labels:?} multipliers {multipliers:?} / {denominator}")
            }
            NodeStatus::Expanded { children, .. } => format!("expanded into {children}"),
            other => format!("{other:?}"),
        };
        println!("{indent}#{} {:?}{via}: {status}", r.id, r.ordering);
    }
    println!("verdict {} after {} nodes", result.verdict.as_str(), result.node_count);
    Ok(())
}
