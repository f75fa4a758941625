//! Runs every merge scenario of a set size and aggregates the verdicts.

use std::io::Write;

use serde::Serialize;

use crate::compression::{build_initial_cons_with, scenarios, seed_rows, InitialCons, InitialConsOptions};
use crate::error::Result;
use crate::search::{
    bfs_prove_from, ModeConfig, NullObserver, Ordering, ProofResult, Progress, RootPolicy, SearchObserver,
};
use crate::transcript::{combine_verdicts, TranscriptHeader, TranscriptRecord, TranscriptWriter, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProveOptions {
    pub config: ModeConfig,
    /// Use forbidden blocks from the merge scenarios; when off, a single
    /// run with no compression certificates is made.
    pub compression: bool,
    /// Seed the all-ones row in zero-sum modes.
    pub seed_ones: bool,
    pub initial_cons: InitialConsOptions,
    /// Start each scenario from its lifted compressed sequencing, or from
    /// the identity ordering.
    pub root: RootPolicy,
}

impl ProveOptions {
    pub fn new(config: ModeConfig) -> Self {
        ProveOptions {
            config,
            compression: true,
            seed_ones: true,
            initial_cons: InitialConsOptions::default(),
            root: RootPolicy::Aligned,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionOutcome {
    pub merge_index: Option<usize>,
    pub verdict: Verdict,
    pub node_count: u64,
    pub max_depth: usize,
    pub max_denominator: String,
    pub open_leaves: u64,
    pub childless_leaves: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub k: usize,
    pub verdict: Verdict,
    pub node_count: u64,
    pub max_depth: usize,
    pub max_denominator: String,
    pub sections: Vec<SectionOutcome>,
}

/// Which scenario a progress update belongs to.
#[derive(Clone, Copy, Debug)]
pub struct SectionProgress<'a> {
    pub section: usize,
    pub sections: usize,
    pub merge_index: Option<usize>,
    pub level: &'a Progress,
}

struct Forward<'a, W: Write> {
    writer: Option<&'a mut TranscriptWriter<W>>,
    on_progress: &'a mut dyn FnMut(SectionProgress<'_>),
    section: usize,
    sections: usize,
    merge_index: Option<usize>,
}

impl<W: Write> SearchObserver for Forward<'_, W> {
    fn record(&mut self, record: &TranscriptRecord) -> Result<()> {
        match self.writer.as_deref_mut() {
            Some(w) => w.record(record),
            None => NullObserver.record(record),
        }
    }

    fn progress(&mut self, level: &Progress) {
        (self.on_progress)(SectionProgress {
            section: self.section,
            sections: self.sections,
            merge_index: self.merge_index,
            level,
        });
    }
}

/// One search run of a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedRun {
    pub merge_index: Option<usize>,
    pub root: Ordering,
    pub initial_cons: InitialCons,
}

/// The runs a proof consists of: one per merge scenario, or a single
/// identity-rooted run without compression.
pub fn plan(opts: &ProveOptions) -> Result<Vec<PlannedRun>> {
    let k = opts.config.k;
    if !opts.compression {
        return Ok(vec![PlannedRun {
            merge_index: None,
            root: Ordering::identity(k),
            initial_cons: InitialCons::empty(k),
        }]);
    }
    scenarios(k, opts.config.mode)?
        .iter()
        .map(|sc| {
            let root = match opts.root {
                RootPolicy::Aligned => Ordering::new(sc.aligned_ordering())?,
                RootPolicy::Identity => Ordering::identity(k),
            };
            Ok(PlannedRun {
                merge_index: Some(sc.merge_index),
                root,
                initial_cons: build_initial_cons_with(sc, opts.initial_cons),
            })
        })
        .collect()
}

/// Proves every scenario in turn, streaming one transcript section per
/// scenario when a writer is given.
pub fn prove_all<W: Write>(
    opts: &ProveOptions,
    mut writer: Option<&mut TranscriptWriter<W>>,
    on_progress: &mut dyn FnMut(SectionProgress<'_>),
) -> Result<RunReport> {
    opts.config.validate()?;
    let k = opts.config.k;
    let seeds = if opts.seed_ones { seed_rows(opts.config.mode, k) } else { vec![] };
    let plan = plan(opts)?;
    let mut outcomes = Vec::new();
    let mut results: Vec<ProofResult> = Vec::new();
    for (idx, run) in plan.iter().enumerate() {
        let merge_index = &run.merge_index;
        if let Some(w) = writer.as_deref_mut() {
            w.begin_section(&TranscriptHeader::for_run(
                &opts.config,
                run.merge_index,
                &run.root,
                &seeds,
                &run.initial_cons,
            ))?;
        }
        let mut fwd = Forward {
            writer: writer.as_deref_mut(),
            on_progress: &mut *on_progress,
            section: idx,
            sections: plan.len(),
            merge_index: *merge_index,
        };
        let result = bfs_prove_from(&opts.config, &run.root, &run.initial_cons, &seeds, &mut fwd)?;
        if let Some(w) = writer.as_deref_mut() {
            w.end_section(&result.to_record())?;
        }
        outcomes.push(SectionOutcome {
            merge_index: *merge_index,
            verdict: result.verdict,
            node_count: result.node_count,
            max_depth: result.max_depth_reached,
            max_denominator: result.max_witness_denominator.to_string(),
            open_leaves: result.open_leaves,
            childless_leaves: result.childless_leaves,
        });
        results.push(result);
    }
    let max_den = results
        .iter()
        .map(|r| r.max_witness_denominator.clone())
        .max()
        .expect("at least one section");
    Ok(RunReport {
        k,
        verdict: combine_verdicts(outcomes.iter().map(|o| o.verdict)),
        node_count: outcomes.iter().map(|o| o.node_count).sum(),
        max_depth: outcomes.iter().map(|o| o.max_depth).max().unwrap_or(0),
        max_denominator: max_den.to_string(),
        sections: outcomes,
    })
}

/// [`prove_all`] without a transcript or progress output.
pub fn prove_quiet(opts: &ProveOptions) -> Result<RunReport> {
    prove_all::<Vec<u8>>(opts, None, &mut |_| {})
}

/// [`prove_all`] into an in-memory transcript.
pub fn prove_to_bytes(opts: &ProveOptions) -> Result<(RunReport, Vec<u8>)> {
    let mut w = TranscriptWriter::new(Vec::new());
    let report = prove_all(opts, Some(&mut w), &mut |_| {})?;
    Ok((report, w.finish()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Mode;
    use crate::transcript::verify_bytes;

    #[test]
    fn general_k4_runs_three_scenarios() {
        let opts = ProveOptions::new(ModeConfig::new(4, Mode::General));
        let (report, bytes) = prove_to_bytes(&opts).unwrap();
        assert_eq!(report.sections.len(), 3);
        assert_eq!(report.verdict, Verdict::Proved);
        assert!(verify_bytes(&bytes).unwrap().is_accepted());
    }

    #[test]
    fn identity_root_policy_also_proves() {
        let mut opts = ProveOptions::new(ModeConfig::new(5, Mode::General));
        opts.root = RootPolicy::Identity;
        let (report, bytes) = prove_to_bytes(&opts).unwrap();
        assert_eq!(report.verdict, Verdict::Proved);
        assert!(verify_bytes(&bytes).unwrap().is_accepted());
        let aligned = prove_quiet(&ProveOptions::new(ModeConfig::new(5, Mode::General))).unwrap();
        assert!(aligned.node_count < report.node_count);
    }

    #[test]
    fn no_compression_is_one_section() {
        let mut opts = ProveOptions::new(ModeConfig::new(5, Mode::ZeroSum));
        opts.compression = false;
        let report = prove_quiet(&opts).unwrap();
        assert_eq!(report.sections.len(), 1);
        assert_eq!(report.sections[0].merge_index, None);
    }
}
