//! Independent transcript checker.
//!
//! Nothing here calls into the search engine or the elimination code:
//! intervals, boundary moves and incidence rows are recomputed from the
//! header, and certificates are checked by recombining the recorded
//! multipliers over the branch rows.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::format::{
    CertificateHistogram, Line, NodeStatus, ResultRecord, TranscriptHeader, TranscriptRecord, Verdict, FORMAT_TAG,
};
use super::io::open_source;
use crate::error::Result;
use crate::search::{Arith, DupPolicy, IntervalPolicy, LeafPolicy, Mode, MAX_ENGINE_K};

/// First problem found, located by line and node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub line: usize,
    pub node_id: Option<u64>,
    pub message: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node_id {
            Some(id) => write!(f, "line {}, node {}: {}", self.line, id, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionSummary {
    pub k: usize,
    pub mode: Mode,
    pub merge_index: Option<usize>,
    pub result: ResultRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifiedTranscript {
    pub sections: Vec<SectionSummary>,
    /// Weakest verdict over all sections.
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verification {
    Accepted(VerifiedTranscript),
    Rejected(Defect),
}

impl Verification {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verification::Accepted(_))
    }
}

/// Verdict of a run made of several sections: aborted beats inconclusive,
/// which beats a paper-policy proof, which beats a strict proof.
pub fn combine_verdicts(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let rank = |v: Verdict| match v {
        Verdict::Proved => 0,
        Verdict::ProvedPaperLeafPolicy => 1,
        Verdict::Inconclusive => 2,
        Verdict::Aborted => 3,
    };
    verdicts.into_iter().max_by_key(|&v| rank(v)).unwrap_or(Verdict::Inconclusive)
}

pub fn verify_path(path: &Path) -> Result<Verification> {
    verify_transcript(open_source(path)?)
}

pub fn verify_bytes(bytes: &[u8]) -> Result<Verification> {
    verify_transcript(bytes)
}

/// Checks every section of a transcript; I/O failures are errors, every
/// content problem is a [`Defect`].
pub fn verify_transcript(reader: impl BufRead) -> Result<Verification> {
    let mut sections = Vec::new();
    let mut current: Option<Section> = None;
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let text = line?;
        if text.trim().is_empty() {
            return Ok(reject(line_no, None, "blank line"));
        }
        let parsed: Line = match serde_json::from_str(&text) {
            Ok(l) => l,
            Err(e) => return Ok(reject(line_no, None, format!("malformed line: {e}"))),
        };
        let step = match (parsed, current.as_mut()) {
            (Line::Header(h), None) => Section::start(h, line_no).map(|s| {
                current = Some(s);
            }),
            (Line::Header(_), Some(_)) => Err(defect(line_no, None, "header inside an unfinished section")),
            (Line::Node(rec), Some(sec)) => sec.node(rec, line_no),
            (Line::Result(res), Some(sec)) => sec.finish(&res, line_no).map(|summary| {
                sections.push(summary);
                current = None;
            }),
            (_, None) => Err(defect(line_no, None, "record outside a section; expected a header")),
        };
        if let Err(d) = step {
            return Ok(Verification::Rejected(d));
        }
    }
    if let Some(sec) = current {
        if let Some(d) = sec.missing_child(last_line + 1) {
            return Ok(Verification::Rejected(d));
        }
        return Ok(reject(last_line + 1, None, "transcript ends without a result line"));
    }
    if sections.is_empty() {
        return Ok(reject(1, None, "empty transcript"));
    }
    let verdict = combine_verdicts(sections.iter().map(|s| s.result.verdict));
    Ok(Verification::Accepted(VerifiedTranscript { sections, verdict }))
}

fn defect(line: usize, node_id: Option<u64>, message: impl Into<String>) -> Defect {
    Defect {
        line,
        node_id,
        message: message.into(),
    }
}

fn reject(line: usize, node_id: Option<u64>, message: impl Into<String>) -> Verification {
    Verification::Rejected(defect(line, node_id, message))
}

/// A child the verifier expects to see, derived from its parent.
struct Expected {
    parent: u64,
    depth: usize,
    interval: [usize; 2],
    ordering: Vec<u8>,
    row: Vec<u8>,
    duplicate: bool,
    rows: Vec<Vec<u8>>,
}

struct Section {
    header: TranscriptHeader,
    intervals: Vec<[usize; 2]>,
    next_id: u64,
    queue: VecDeque<Expected>,
    visited: HashSet<(Vec<u8>, Vec<Vec<u8>>)>,
    hist: CertificateHistogram,
    max_den: BigInt,
    max_depth: usize,
    open: u64,
    early_open: u64,
    childless: u64,
    suppressed: u64,
}

fn binary(v: &[u8], k: usize) -> bool {
    v.len() == k && v.iter().all(|&b| b <= 1)
}

fn state_key(ordering: &[u8], rows: &[Vec<u8>]) -> (Vec<u8>, Vec<Vec<u8>>) {
    let mut r = rows.to_vec();
    r.sort();
    (ordering.to_vec(), r)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    let q = BigRational::new(n, d);
    (q.to_string() == s).then_some(q)
}

impl Section {
    fn start(header: TranscriptHeader, line: usize) -> std::result::Result<Section, Defect> {
        let fail = |m: String| Err(defect(line, None, m));
        if header.format != FORMAT_TAG {
            return fail(format!("unknown format `{}`", header.format));
        }
        if header.compute_hash() != header.config_hash {
            return fail("config hash does not match the header contents".into());
        }
        let k = header.k;
        if !(2..=MAX_ENGINE_K).contains(&k) {
            return fail(format!("k = {k} out of range"));
        }
        let mut sorted = header.root_ordering.clone();
        sorted.sort_unstable();
        if sorted != (1..=k as u8).collect::<Vec<_>>() {
            return fail(format!("root ordering {:?} is not a permutation of 1..={k}", header.root_ordering));
        }
        if let Some(bad) = header.seeded_rows.iter().chain(&header.initial_cons).find(|r| !binary(r, k)) {
            return fail(format!("header vector {bad:?} is not a 0/1 vector of length {k}"));
        }
        let cap = if header.mode.is_zero_sum() && header.interval_policy == IntervalPolicy::Paper {
            k / 2
        } else {
            k
        };
        let intervals = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| [i, j]))
            .filter(|&[i, j]| (i, j) != (0, k - 1) && j - i <= cap)
            .collect();

        let mut sec = Section {
            intervals,
            next_id: 0,
            queue: VecDeque::new(),
            visited: HashSet::new(),
            hist: CertificateHistogram::default(),
            max_den: BigInt::one(),
            max_depth: 0,
            open: 0,
            early_open: 0,
            childless: 0,
            suppressed: 0,
            header,
        };
        let root_rows = sec.header.seeded_rows.clone();
        sec.queue.push_back(Expected {
            parent: u64::MAX,
            depth: 0,
            interval: [0, 0],
            ordering: sec.header.root_ordering.clone(),
            row: vec![],
            duplicate: false,
            rows: root_rows,
        });
        Ok(sec)
    }

    fn missing_child(&self, line: usize) -> Option<Defect> {
        self.queue.front().map(|e| {
            let parent = (e.parent != u64::MAX).then_some(e.parent);
            defect(line, parent, format!("child [{},{}] is missing", e.interval[0], e.interval[1]))
        })
    }

    fn node(&mut self, rec: TranscriptRecord, line: usize) -> std::result::Result<(), Defect> {
        let id = Some(rec.id);
        if rec.id != self.next_id {
            if rec.id > self.next_id {
                if let Some(d) = self.missing_child(line) {
                    return Err(d);
                }
            }
            return Err(defect(line, id, format!("expected node id {}", self.next_id)));
        }
        let Some(exp) = self.queue.pop_front() else {
            return Err(defect(line, id, "no parent lists this node as a child"));
        };
        self.next_id += 1;
        let k = self.header.k;

        if exp.parent == u64::MAX {
            if rec.parent.is_some() || rec.interval.is_some() || rec.row.is_some() || rec.duplicate {
                return Err(defect(line, id, "root must have no parent, interval or row"));
            }
        } else {
            if rec.parent != Some(exp.parent) {
                return Err(defect(line, id, format!("parent should be {}", exp.parent)));
            }
            if rec.interval != Some(exp.interval) {
                return Err(defect(line, id, format!("interval should be {:?}", exp.interval)));
            }
            if rec.row.as_deref() != Some(&exp.row[..]) {
                return Err(defect(line, id, "row is not the incidence vector of the interval"));
            }
            if rec.duplicate != exp.duplicate {
                return Err(defect(line, id, "duplicate flag disagrees with the branch rows"));
            }
        }
        if rec.depth != exp.depth {
            return Err(defect(line, id, format!("depth should be {}", exp.depth)));
        }
        if rec.ordering != exp.ordering {
            return Err(defect(line, id, "ordering is not the boundary move of the parent ordering"));
        }
        self.max_depth = self.max_depth.max(rec.depth);
        let rows = exp.rows;
        if rec.parent.is_none() && self.header.dup_policy == DupPolicy::Follow {
            self.visited.insert(state_key(&rec.ordering, &rows));
        }

        match &rec.status {
            NodeStatus::Open => {
                self.open += 1;
                if self.header.max_depth.is_none_or(|d| rec.depth < d) {
                    self.early_open += 1;
                }
            }
            NodeStatus::Expanded { children, suppressed } => {
                if self.header.max_depth.is_some_and(|d| rec.depth >= d) {
                    return Err(defect(line, id, "node at the depth limit was expanded"));
                }
                let mut listed = Vec::new();
                let mut skipped = Vec::new();
                for &[i, j] in &self.intervals {
                    let row: Vec<u8> = (1..=k as u8)
                        .map(|l| u8::from(rec.ordering[i..=j].contains(&l)))
                        .collect();
                    let duplicate = rows.contains(&row);
                    if duplicate && self.header.dup_policy == DupPolicy::Skip {
                        continue;
                    }
                    let mut ordering = rec.ordering.clone();
                    if i >= 1 {
                        ordering.swap(i - 1, i);
                    } else {
                        ordering.swap(j, j + 1);
                    }
                    let mut child_rows = rows.clone();
                    if !duplicate {
                        child_rows.push(row.clone());
                    }
                    if self.header.dup_policy == DupPolicy::Follow
                        && !self.visited.insert(state_key(&ordering, &child_rows))
                    {
                        skipped.push([i, j]);
                        continue;
                    }
                    listed.push(Expected {
                        parent: rec.id,
                        depth: rec.depth + 1,
                        interval: [i, j],
                        ordering,
                        row,
                        duplicate,
                        rows: child_rows,
                    });
                }
                if *suppressed != skipped {
                    return Err(defect(line, id, "suppressed intervals disagree with the visited states"));
                }
                if *children != listed.len() {
                    return Err(defect(
                        line,
                        id,
                        format!("lists {children} children but {} intervals require one", listed.len()),
                    ));
                }
                if listed.is_empty() && skipped.is_empty() {
                    self.childless += 1;
                }
                self.suppressed += skipped.len() as u64;
                self.queue.extend(listed);
            }
            NodeStatus::Certified {
                certificate,
                labels,
                target,
                multipliers,
                denominator,
            } => {
                self.check_certificate(certificate, labels, target, multipliers, denominator, &rows)
                    .map_err(|m| defect(line, id, m))?;
                self.hist.bump(certificate);
            }
        }
        Ok(())
    }

    fn check_certificate(
        &mut self,
        kind: &str,
        labels: &[usize],
        target: &[i64],
        multipliers: &[String],
        denominator: &str,
        rows: &[Vec<u8>],
    ) -> std::result::Result<(), String> {
        let k = self.header.k;
        let in_range = |l: usize| (1..=k).contains(&l);
        let mut expected = vec![0i64; k];
        match (kind, labels) {
            ("zero_element", &[i]) if in_range(i) => expected[i - 1] = 1,
            ("equality", &[i, j]) if in_range(i) && in_range(j) && i < j => {
                expected[i - 1] = 1;
                expected[j - 1] = -1;
            }
            ("inverse_pair", &[i, j]) if in_range(i) && in_range(j) && i <= j => {
                if self.header.mode != Mode::ZeroSumNoInverse {
                    return Err("inverse-pair certificate outside zero-sum-distinct mode".into());
                }
                expected[i - 1] += 1;
                expected[j - 1] += 1;
            }
            ("compression", []) => {
                let hit = self
                    .header
                    .initial_cons
                    .iter()
                    .any(|w| w.iter().zip(target).all(|(&a, &b)| i64::from(a) == b));
                if !hit || target.len() != k {
                    return Err("compression target is not a forbidden block".into());
                }
                expected = target.to_vec();
            }
            _ => return Err(format!("certificate `{kind}` with labels {labels:?} is not well formed")),
        }
        if target != expected.as_slice() {
            return Err("target vector does not match the certificate".into());
        }
        if multipliers.len() != rows.len() {
            return Err(format!("{} multipliers for {} rows", multipliers.len(), rows.len()));
        }
        let lambdas = multipliers
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| format!("multiplier `{s}` is not a reduced rational")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let lcm = lambdas.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        if denominator != lcm.to_string() {
            return Err(format!("denominator should be {lcm}"));
        }
        if self.header.arith == Arith::Integer && !lcm.is_one() {
            return Err("fractional witness in integer mode".into());
        }
        for (c, &want) in expected.iter().enumerate() {
            let got = rows
                .iter()
                .zip(&lambdas)
                .filter(|(row, _)| row[c] == 1)
                .fold(BigRational::zero(), |acc, (_, q)| acc + q);
            if got != BigRational::from_integer(want.into()) {
                return Err(format!("witness does not recombine to the target at label {}", c + 1));
            }
        }
        if lcm > self.max_den {
            self.max_den = lcm;
        }
        Ok(())
    }

    fn finish(&mut self, res: &ResultRecord, line: usize) -> std::result::Result<SectionSummary, Defect> {
        if let Some(d) = self.missing_child(line) {
            return Err(d);
        }
        let fail = |m: String| Err(defect(line, None, m));
        let verdict = if self.open > 0 && res.verdict == Verdict::Aborted {
            Verdict::Aborted
        } else if self.early_open > 0 {
            return fail("open node above the depth limit in a run that did not abort".into());
        } else if self.open > 0 {
            Verdict::Inconclusive
        } else if self.childless + self.suppressed == 0 {
            Verdict::Proved
        } else if self.header.leaf_policy == LeafPolicy::Paper {
            Verdict::ProvedPaperLeafPolicy
        } else {
            Verdict::Inconclusive
        };
        let recomputed = ResultRecord {
            verdict,
            node_count: self.next_id,
            max_depth: self.max_depth,
            certificates: self.hist,
            max_denominator: self.max_den.to_string(),
            open_leaves: self.open,
            childless_leaves: self.childless,
            suppressed: self.suppressed,
        };
        if *res != recomputed {
            return fail(format!(
                "result line disagrees with the records; recomputed {}",
                serde_json::to_string(&recomputed).expect("serializes")
            ));
        }
        Ok(SectionSummary {
            k: self.header.k,
            mode: self.header.mode,
            merge_index: self.header.merge_index,
            result: recomputed,
        })
    }
}
