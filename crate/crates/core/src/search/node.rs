use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{DupPolicy, IntervalPolicy, ModeConfig};
use crate::error::{invalid, Result};
use crate::linalg::{ConstraintMatrix, IntVector};

/// A permutation of the labels `1..=k`; position `r` holds label `labels[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordering(Vec<u8>);

impl Ordering {
    pub fn identity(k: usize) -> Self {
        Ordering((1..=k as u8).collect())
    }

    pub fn new(labels: Vec<u8>) -> Result<Self> {
        let k = labels.len();
        let mut seen = vec![false; k + 1];
        for &l in &labels {
            let l = l as usize;
            if l == 0 || l > k || seen[l] {
                return Err(invalid(format!("{labels:?} is not a permutation of 1..={k}")));
            }
            seen[l] = true;
        }
        Ok(Ordering(labels))
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn swapped(&self, a: usize, b: usize) -> Self {
        let mut labels = self.0.clone();
        labels.swap(a, b);
        Ordering(labels)
    }

    /// The adjacent boundary swap applied after recording `interval`:
    /// positions `i - 1, i` when `i >= 1`, else positions `j, j + 1`.
    pub fn boundary_move(&self, interval: Interval) -> Self {
        if interval.start >= 1 {
            self.swapped(interval.start - 1, interval.start)
        } else {
            self.swapped(interval.end, interval.end + 1)
        }
    }

    /// Bitmask of the labels at positions `start..=end`.
    pub(crate) fn block_mask(&self, interval: Interval) -> u32 {
        self.0[interval.start..=interval.end]
            .iter()
            .fold(0, |m, &l| m | 1 << (l - 1))
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Closed range of positions `[start, end]`, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        Interval { start, end }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// Position pairs that may hold the zero block of the current ordering, in
/// lexicographic order. The full interval is never admissible; zero-sum
/// modes under the paper policy also cap `end - start` at `k / 2`.
pub fn admissible_intervals(config: &ModeConfig) -> Vec<Interval> {
    intervals_for(config.k, config.mode.is_zero_sum(), config.interval_policy)
}

pub(crate) fn intervals_for(k: usize, zero_sum: bool, policy: IntervalPolicy) -> Vec<Interval> {
    let cap = if zero_sum && policy == IntervalPolicy::Paper {
        k / 2
    } else {
        usize::MAX
    };
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if (i, j) == (0, k - 1) || j - i > cap {
                continue;
            }
            out.push(Interval::new(i, j));
        }
    }
    out
}

/// 0/1 vector marking the labels that occupy `interval` in `ordering`.
pub fn incidence_vector(ordering: &Ordering, interval: Interval, k: usize) -> Result<IntVector> {
    if ordering.len() != k {
        return Err(invalid(format!("ordering has {} labels, expected {k}", ordering.len())));
    }
    if interval.start >= interval.end || interval.end >= k {
        return Err(invalid(format!("interval {interval} out of range for k = {k}")));
    }
    Ok(IntVector::from_mask(ordering.block_mask(interval), k))
}

/// A node of the search tree: an ordering plus the relations recorded on
/// its branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchNode {
    pub id: u64,
    pub parent_id: Option<u64>,
    pub ordering: Ordering,
    /// Constraint rows as label bitmasks; the first `seeded` are seeds.
    pub rows: Vec<u32>,
    pub seeded: usize,
    pub depth: usize,
    pub generating_interval: Option<Interval>,
    /// The incidence row of the generating interval.
    pub added_row: Option<u32>,
    /// Set under the follow policy when `added_row` was already recorded.
    pub duplicate: bool,
}

impl SearchNode {
    pub fn root(k: usize, seeded_rows: Vec<u32>) -> Self {
        SearchNode {
            id: 0,
            parent_id: None,
            ordering: Ordering::identity(k),
            seeded: seeded_rows.len(),
            rows: seeded_rows,
            depth: 0,
            generating_interval: None,
            added_row: None,
            duplicate: false,
        }
    }

    pub fn k(&self) -> usize {
        self.ordering.len()
    }

    pub fn constraints(&self) -> ConstraintMatrix {
        let k = self.k();
        ConstraintMatrix::new(self.rows.iter().map(|&m| IntVector::from_mask(m, k)).collect())
    }

    /// Children in canonical interval order, with ids `first_id, first_id + 1, ...`.
    ///
    /// Under the skip policy an interval whose row is already recorded yields
    /// no child. Under the follow policy it yields a child with the moved
    /// ordering and an unchanged matrix, marked `duplicate`.
    pub fn expand(&self, config: &ModeConfig, first_id: u64) -> Vec<SearchNode> {
        let mut next = first_id;
        let mut out = Vec::new();
        for interval in admissible_intervals(config) {
            let row = self.ordering.block_mask(interval);
            let duplicate = self.rows.contains(&row);
            if duplicate && config.dup_policy == DupPolicy::Skip {
                continue;
            }
            let mut rows = self.rows.clone();
            if !duplicate {
                rows.push(row);
            }
            out.push(SearchNode {
                id: next,
                parent_id: Some(self.id),
                ordering: self.ordering.boundary_move(interval),
                rows,
                seeded: self.seeded,
                depth: self.depth + 1,
                generating_interval: Some(interval),
                added_row: Some(row),
                duplicate,
            });
            next += 1;
        }
        out
    }
}

pub fn expand(node: &SearchNode, config: &ModeConfig, first_id: u64) -> Vec<SearchNode> {
    node.expand(config, first_id)
}

pub(crate) fn mask_to_bits(mask: u32, k: usize) -> Vec<u8> {
    (0..k).map(|i| ((mask >> i) & 1) as u8).collect()
}
