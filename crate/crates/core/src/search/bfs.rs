//! Level-synchronous breadth-first exploration.
//!
//! Nodes of one level are examined in parallel; their outcomes are merged
//! sequentially in node-id order, so ids, records and verdicts do not depend
//! on the worker count or on completion order.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::certificate::{check_certificates, Certificate};
use super::config::{DupPolicy, LeafPolicy, ModeConfig};
use super::node::{mask_to_bits, Ordering, SearchNode};
use crate::compression::InitialCons;
use crate::error::{invalid, Result};
use crate::linalg::IntVector;
use crate::transcript::format::{CertificateHistogram, NodeStatus, ResultRecord, TranscriptRecord, Verdict};

/// Level summary published after each BFS level.
#[derive(Clone, Debug)]
pub struct Progress {
    pub depth: usize,
    pub frontier: usize,
    pub nodes: u64,
    pub nodes_per_sec: f64,
}

/// Receives node records in id order, plus per-level progress.
pub trait SearchObserver {
    fn record(&mut self, record: &TranscriptRecord) -> Result<()>;

    fn progress(&mut self, _progress: &Progress) {}
}

impl SearchObserver for Vec<TranscriptRecord> {
    fn record(&mut self, record: &TranscriptRecord) -> Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

/// Discards records.
pub struct NullObserver;

impl SearchObserver for NullObserver {
    fn record(&mut self, _record: &TranscriptRecord) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofResult {
    pub verdict: Verdict,
    pub node_count: u64,
    pub max_depth_reached: usize,
    pub certificate_histogram: CertificateHistogram,
    pub max_witness_denominator: BigInt,
    pub open_leaves: u64,
    pub childless_leaves: u64,
    pub suppressed_children: u64,
}

impl ProofResult {
    pub fn to_record(&self) -> ResultRecord {
        ResultRecord {
            verdict: self.verdict,
            node_count: self.node_count,
            max_depth: self.max_depth_reached,
            certificates: self.certificate_histogram,
            max_denominator: self.max_witness_denominator.to_string(),
            open_leaves: self.open_leaves,
            childless_leaves: self.childless_leaves,
            suppressed: self.suppressed_children,
        }
    }
}

enum Outcome {
    Certified(Certificate),
    Open,
    Expanded(Vec<SearchNode>),
}

fn to_masks(rows: &[IntVector], k: usize) -> Result<Vec<u32>> {
    rows.iter()
        .map(|r| {
            if r.len() != k {
                return Err(invalid(format!("seeded row {r} does not have length {k}")));
            }
            let bits = r
                .to_i64s()
                .filter(|v| v.iter().all(|&x| x == 0 || x == 1))
                .ok_or_else(|| invalid(format!("seeded row {r} is not a 0/1 vector")))?;
            Ok(bits.iter().enumerate().fold(0u32, |m, (i, &b)| m | (b as u32) << i))
        })
        .collect()
}

fn certified_status(cert: &Certificate) -> NodeStatus {
    NodeStatus::Certified {
        certificate: cert.kind.tag().to_string(),
        labels: cert.kind.labels(),
        target: cert.target.to_i64s().expect("small target entries"),
        multipliers: cert.witness.multipliers.iter().map(ToString::to_string).collect(),
        denominator: cert.witness.denominator.to_string(),
    }
}

pub(crate) fn node_record(node: &SearchNode, status: NodeStatus) -> TranscriptRecord {
    let k = node.k();
    TranscriptRecord {
        id: node.id,
        parent: node.parent_id,
        depth: node.depth,
        ordering: node.ordering.labels().to_vec(),
        interval: node.generating_interval.map(|v| [v.start, v.end]),
        row: node.added_row.map(|m| mask_to_bits(m, k)),
        duplicate: node.duplicate,
        status,
    }
}

fn state_key(node: &SearchNode) -> (Vec<u8>, Vec<u32>) {
    let mut rows = node.rows.clone();
    rows.sort_unstable();
    (node.ordering.labels().to_vec(), rows)
}

/// Runs the counterexample search from the identity ordering with the given
/// seeds and forbidden vectors.
pub fn bfs_prove(
    config: &ModeConfig,
    initial_cons: &InitialCons,
    seeded_rows: &[IntVector],
    observer: &mut dyn SearchObserver,
) -> Result<ProofResult> {
    bfs_prove_from(config, &Ordering::identity(config.k), initial_cons, seeded_rows, observer)
}

/// [`bfs_prove`] starting from an arbitrary root ordering.
pub fn bfs_prove_from(
    config: &ModeConfig,
    root_ordering: &Ordering,
    initial_cons: &InitialCons,
    seeded_rows: &[IntVector],
    observer: &mut dyn SearchObserver,
) -> Result<ProofResult> {
    config.validate()?;
    let k = config.k;
    if root_ordering.len() != k {
        return Err(invalid(format!("root ordering {root_ordering} does not have length {k}")));
    }
    let seeds = to_masks(seeded_rows, k)?;
    let pool = if config.thread_count > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.thread_count)
                .build()
                .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };

    let process = |node: &SearchNode| -> Result<Outcome> {
        if let Some(cert) = check_certificates(node, initial_cons, config)? {
            return Ok(Outcome::Certified(cert));
        }
        if config.max_depth.is_some_and(|d| node.depth >= d) {
            return Ok(Outcome::Open);
        }
        Ok(Outcome::Expanded(node.expand(config, 0)))
    };

    let root = SearchNode {
        ordering: root_ordering.clone(),
        ..SearchNode::root(k, seeds)
    };
    let mut visited: HashSet<(Vec<u8>, Vec<u32>)> = HashSet::new();
    if config.dup_policy == DupPolicy::Follow {
        visited.insert(state_key(&root));
    }

    let mut hist = CertificateHistogram::default();
    let mut max_den = BigInt::one();
    let (mut open, mut childless, mut suppressed_total) = (0u64, 0u64, 0u64);
    let mut max_depth_reached = 0;
    let mut next_id: u64 = 1;
    let mut aborted = false;
    let started = Instant::now();

    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let depth = frontier[0].depth;
        max_depth_reached = max_depth_reached.max(depth);
        if aborted {
            for node in &frontier {
                open += 1;
                observer.record(&node_record(node, NodeStatus::Open))?;
            }
            break;
        }
        let outcomes: Vec<Outcome> = match &pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .with_min_len(16)
                    .map(process)
                    .collect::<Result<Vec<_>>>()
            })?,
            None => frontier.iter().map(process).collect::<Result<Vec<_>>>()?,
        };

        let mut next = Vec::new();
        for (node, outcome) in frontier.iter().zip(outcomes) {
            let status = match outcome {
                Outcome::Certified(cert) => {
                    hist.bump(cert.kind.tag());
                    if cert.witness.denominator > max_den {
                        max_den = cert.witness.denominator.clone();
                    }
                    certified_status(&cert)
                }
                Outcome::Open => {
                    open += 1;
                    NodeStatus::Open
                }
                Outcome::Expanded(children) => {
                    let mut suppressed = Vec::new();
                    let mut count = 0;
                    for mut child in children {
                        if config.dup_policy == DupPolicy::Follow && !visited.insert(state_key(&child)) {
                            let v = child.generating_interval.expect("children carry an interval");
                            suppressed.push([v.start, v.end]);
                            continue;
                        }
                        child.id = next_id;
                        next_id += 1;
                        next.push(child);
                        count += 1;
                    }
                    if count == 0 && suppressed.is_empty() {
                        childless += 1;
                    }
                    suppressed_total += suppressed.len() as u64;
                    NodeStatus::Expanded { children: count, suppressed }
                }
            };
            observer.record(&node_record(node, status))?;
        }

        let elapsed = started.elapsed().as_secs_f64().max(1e-9);
        observer.progress(&Progress {
            depth,
            frontier: next.len(),
            nodes: next_id,
            nodes_per_sec: next_id as f64 / elapsed,
        });
        if config.node_budget.is_some_and(|b| next_id > b) {
            aborted = true;
        }
        frontier = next;
    }

    let verdict = if aborted {
        Verdict::Aborted
    } else if open > 0 {
        Verdict::Inconclusive
    } else if childless + suppressed_total == 0 {
        Verdict::Proved
    } else if config.leaf_policy == LeafPolicy::Paper {
        Verdict::ProvedPaperLeafPolicy
    } else {
        Verdict::Inconclusive
    };

    Ok(ProofResult {
        verdict,
        node_count: next_id,
        max_depth_reached,
        certificate_histogram: hist,
        max_witness_denominator: max_den,
        open_leaves: open,
        childless_leaves: childless,
        suppressed_children: suppressed_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::seed_rows;
    use crate::search::config::Mode;

    #[test]
    fn zero_sum_k3_seeded() {
        let cfg = ModeConfig::new(3, Mode::ZeroSum);
        let mut recs = Vec::new();
        let r = bfs_prove(&cfg, &InitialCons::empty(3), &seed_rows(Mode::ZeroSum, 3), &mut recs).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        assert_eq!(r.node_count, 3);
        assert_eq!(r.certificate_histogram.zero_element, 2);
        let labels: Vec<_> = recs[1..]
            .iter()
            .map(|rec| match &rec.status {
                NodeStatus::Certified { labels, .. } => labels.clone(),
                s => panic!("unexpected {s:?}"),
            })
            .collect();
        assert_eq!(labels, vec![vec![3], vec![1]]);
    }

    #[test]
    fn general_k3_depth_one_is_inconclusive() {
        let mut cfg = ModeConfig::new(3, Mode::General);
        cfg.max_depth = Some(1);
        let r = bfs_prove(&cfg, &InitialCons::empty(3), &[], &mut NullObserver).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.open_leaves, 2);
    }

    #[test]
    fn general_k3_pure_tree_proves() {
        let cfg = ModeConfig::new(3, Mode::General);
        let r = bfs_prove(&cfg, &InitialCons::empty(3), &[], &mut NullObserver).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        assert_eq!(r.node_count, 7);
        assert_eq!(r.certificate_histogram.equality, 4);
    }

    #[test]
    fn k2_general_has_childless_root() {
        let mut cfg = ModeConfig::new(2, Mode::General);
        let r = bfs_prove(&cfg, &InitialCons::empty(2), &[], &mut NullObserver).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.childless_leaves, 1);
        cfg.leaf_policy = LeafPolicy::Paper;
        let r = bfs_prove(&cfg, &InitialCons::empty(2), &[], &mut NullObserver).unwrap();
        assert_eq!(r.verdict, Verdict::ProvedPaperLeafPolicy);
    }

    #[test]
    fn node_budget_aborts() {
        let mut cfg = ModeConfig::new(6, Mode::General);
        cfg.node_budget = Some(5);
        let mut recs = Vec::new();
        let r = bfs_prove(&cfg, &InitialCons::empty(6), &[], &mut recs).unwrap();
        assert_eq!(r.verdict, Verdict::Aborted);
        assert_eq!(recs.len() as u64, r.node_count);
    }

    #[test]
    fn rejects_non_binary_seed() {
        let cfg = ModeConfig::new(3, Mode::General);
        let bad = [IntVector::from_i64s(&[1, 2, 0])];
        assert!(bfs_prove(&cfg, &InitialCons::empty(3), &bad, &mut NullObserver).is_err());
    }
}
