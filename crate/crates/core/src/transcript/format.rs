//! Line-delimited JSON records. See `docs/transcript-format.md` for the
//! field-by-field description.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::compression::InitialCons;
use crate::linalg::IntVector;
use crate::search::{Arith, DupPolicy, IntervalPolicy, LeafPolicy, Mode, ModeConfig, Ordering};

pub const FORMAT_TAG: &str = "seqprove-transcript/1";

/// First line of every section; enough to re-run the search exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub format: String,
    pub engine_version: String,
    pub k: usize,
    pub mode: Mode,
    pub arith: Arith,
    pub dup_policy: DupPolicy,
    pub interval_policy: IntervalPolicy,
    pub leaf_policy: LeafPolicy,
    pub max_depth: Option<usize>,
    pub merge_index: Option<usize>,
    pub root_ordering: Vec<u8>,
    pub seeded_rows: Vec<Vec<u8>>,
    pub initial_cons: Vec<Vec<u8>>,
    pub config_hash: String,
}

impl TranscriptHeader {
    /// Header for one search run; seeds must be 0/1 vectors.
    pub fn for_run(
        config: &ModeConfig,
        merge_index: Option<usize>,
        root_ordering: &Ordering,
        seeded_rows: &[IntVector],
        initial_cons: &InitialCons,
    ) -> Self {
        let bits = |v: &IntVector| -> Vec<u8> {
            v.to_i64s()
                .expect("seed entries fit in i64")
                .into_iter()
                .map(|x| x as u8)
                .collect()
        };
        TranscriptHeader {
            format: FORMAT_TAG.to_string(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            k: config.k,
            mode: config.mode,
            arith: config.arith,
            dup_policy: config.dup_policy,
            interval_policy: config.interval_policy,
            leaf_policy: config.leaf_policy,
            max_depth: config.max_depth,
            merge_index,
            root_ordering: root_ordering.labels().to_vec(),
            seeded_rows: seeded_rows.iter().map(bits).collect(),
            initial_cons: initial_cons.vectors().iter().map(bits).collect(),
            config_hash: String::new(),
        }
        .with_hash()
    }

    /// SHA-256 of the header serialized with an empty `config_hash`.
    pub fn compute_hash(&self) -> String {
        let mut clean = self.clone();
        clean.config_hash.clear();
        let bytes = serde_json::to_vec(&clean).expect("header serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn with_hash(mut self) -> Self {
        self.config_hash = self.compute_hash();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeStatus {
    Expanded {
        children: usize,
        /// Intervals whose follow-policy child repeated a visited state.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        suppressed: Vec<[usize; 2]>,
    },
    Certified {
        certificate: String,
        labels: Vec<usize>,
        target: Vec<i64>,
        /// Rationals as `"n"` or `"n/d"`, one per row of the node (seeds first).
        multipliers: Vec<String>,
        denominator: String,
    },
    Open,
}

/// One search node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub id: u64,
    pub parent: Option<u64>,
    pub depth: usize,
    pub ordering: Vec<u8>,
    pub interval: Option<[usize; 2]>,
    pub row: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub duplicate: bool,
    pub status: NodeStatus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateHistogram {
    pub zero_element: u64,
    pub equality: u64,
    pub inverse_pair: u64,
    pub compression: u64,
}

impl CertificateHistogram {
    pub fn bump(&mut self, tag: &str) -> bool {
        match tag {
            "zero_element" => self.zero_element += 1,
            "equality" => self.equality += 1,
            "inverse_pair" => self.inverse_pair += 1,
            "compression" => self.compression += 1,
            _ => return false,
        }
        true
    }

    pub fn total(&self) -> u64 {
        self.zero_element + self.equality + self.inverse_pair + self.compression
    }

    pub fn merge(&mut self, other: &CertificateHistogram) {
        self.zero_element += other.zero_element;
        self.equality += other.equality;
        self.inverse_pair += other.inverse_pair;
        self.compression += other.compression;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every leaf carries a certificate.
    Proved,
    /// Every leaf is certified or childless; only meaningful under the paper leaf policy.
    ProvedPaperLeafPolicy,
    Inconclusive,
    /// The node budget ran out.
    Aborted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Proved => "proved",
            Verdict::ProvedPaperLeafPolicy => "proved (paper leaf policy)",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Aborted => "aborted",
        }
    }

    pub fn is_proved(self) -> bool {
        matches!(self, Verdict::Proved | Verdict::ProvedPaperLeafPolicy)
    }
}

/// Last line of a section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub verdict: Verdict,
    pub node_count: u64,
    pub max_depth: usize,
    pub certificates: CertificateHistogram,
    pub max_denominator: String,
    pub open_leaves: u64,
    pub childless_leaves: u64,
    pub suppressed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Line {
    Header(TranscriptHeader),
    Node(TranscriptRecord),
    Result(ResultRecord),
}

impl Line {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript line serializes")
    }
}
