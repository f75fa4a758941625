//! Merge scenarios and the forbidden-block lists they induce.
//!
//! A set `A` of size `k` is compressed by merging two elements into their
//! sum, giving `A'` of size `k - 1` with a sequencing `x_1, ..., x_{k-1}`.
//! Labels `1` and `2` of `A` are the merged pair; labels `3..=k` are the
//! remaining `x`'s in sequencing order. Every consecutive block of that
//! sequencing other than the whole of it has a nonzero sum, and each block
//! lifts to a 0/1 vector over the labels of `A`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::IntVector;
use crate::search::Mode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeScenario {
    pub k: usize,
    pub mode: Mode,
    /// `x_{merge_index}` of the `A'` sequencing equals `a_1 + a_2`.
    pub merge_index: usize,
    /// Entry `t` lists the `A` labels making up `x_{t+1}`.
    pub label_map: Vec<Vec<usize>>,
}

impl MergeScenario {
    pub fn new(k: usize, mode: Mode, merge_index: usize) -> Result<Self> {
        if k < 3 {
            return Err(invalid(format!("merge scenarios need k >= 3, got {k}")));
        }
        if !(1..k).contains(&merge_index) {
            return Err(invalid(format!(
                "merge index {merge_index} outside 1..={}",
                k - 1
            )));
        }
        if mode.is_zero_sum() && merge_index != 1 {
            return Err(invalid("zero-sum modes merge into x_1"));
        }
        let mut next = 3;
        let label_map = (1..k)
            .map(|t| {
                if t == merge_index {
                    vec![1, 2]
                } else {
                    next += 1;
                    vec![next - 1]
                }
            })
            .collect();
        Ok(MergeScenario {
            k,
            mode,
            merge_index,
            label_map,
        })
    }

    /// The sequencing of `A'` written out over `A` labels, with the merged
    /// pair in place of `x_{merge_index}`.
    pub fn aligned_ordering(&self) -> Vec<u8> {
        self.label_map.iter().flatten().map(|&l| l as u8).collect()
    }

    /// Bitmask over `A` labels (bit `l - 1` for label `l`) of the block
    /// `x_{s+1} .. x_t`.
    pub fn block_mask(&self, s: usize, t: usize) -> u32 {
        self.label_map[s..t]
            .iter()
            .flatten()
            .fold(0u32, |m, &l| m | 1 << (l - 1))
    }
}

/// All merge scenarios for a set of size `k`: a single one for zero-sum modes
/// (the sum can be rotated to the front), `k - 1` otherwise.
pub fn scenarios(k: usize, mode: Mode) -> Result<Vec<MergeScenario>> {
    if k < 3 {
        return Err(invalid(format!("merge scenarios need k >= 3, got {k}")));
    }
    if mode.is_zero_sum() {
        Ok(vec![MergeScenario::new(k, mode, 1)?])
    } else {
        (1..k).map(|i| MergeScenario::new(k, mode, i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitialConsOptions {
    /// Keep blocks made of a single `x` (they only say `x_t != 0`).
    pub single_blocks: bool,
}

impl Default for InitialConsOptions {
    fn default() -> Self {
        InitialConsOptions {
            single_blocks: true,
        }
    }
}

/// Forbidden (non-zero-sum) label vectors, ordered by block length then start.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialCons {
    masks: Vec<u32>,
    k: usize,
}

impl InitialCons {
    pub fn empty(k: usize) -> Self {
        InitialCons { masks: vec![], k }
    }

    pub fn from_masks(k: usize, masks: Vec<u32>) -> Self {
        InitialCons { masks, k }
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn vectors(&self) -> Vec<IntVector> {
        self.masks
            .iter()
            .map(|&m| IntVector::from_mask(m, self.k))
            .collect()
    }
}

pub fn build_initial_cons(scenario: &MergeScenario) -> InitialCons {
    build_initial_cons_with(scenario, InitialConsOptions::default())
}

pub fn build_initial_cons_with(scenario: &MergeScenario, opts: InitialConsOptions) -> InitialCons {
    let n = scenario.k - 1;
    let mut masks: Vec<u32> = Vec::new();
    for len in 1..=n {
        if len == 1 && !opts.single_blocks {
            continue;
        }
        for s in 0..=n - len {
            let t = s + len;
            if (s, t) == (0, n) {
                continue;
            }
            let m = scenario.block_mask(s, t);
            if !masks.contains(&m) {
                masks.push(m);
            }
        }
    }
    InitialCons {
        masks,
        k: scenario.k,
    }
}

/// Rows assumed from the hypotheses alone: the all-ones relation for
/// zero-sum modes.
pub fn seed_rows(mode: Mode, k: usize) -> Vec<IntVector> {
    if mode.is_zero_sum() {
        vec![IntVector::from_i64s(&vec![1; k])]
    } else {
        vec![]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(ic: &InitialCons) -> Vec<Vec<i64>> {
        ic.vectors().iter().map(|v| v.to_i64s().unwrap()).collect()
    }

    #[test]
    fn scenario_counts() {
        assert_eq!(scenarios(5, Mode::ZeroSum).unwrap().len(), 1);
        assert_eq!(scenarios(5, Mode::ZeroSum).unwrap()[0].merge_index, 1);
        let g = scenarios(5, Mode::General).unwrap();
        assert_eq!(g.iter().map(|s| s.merge_index).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(scenarios(3, Mode::General).unwrap().len(), 2);
        assert!(scenarios(2, Mode::General).is_err());
    }

    #[test]
    fn aligned_orderings() {
        let s = MergeScenario::new(6, Mode::General, 3).unwrap();
        assert_eq!(s.aligned_ordering(), vec![3, 4, 1, 2, 5, 6]);
        let s = MergeScenario::new(5, Mode::ZeroSum, 1).unwrap();
        assert_eq!(s.aligned_ordering(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn zero_sum_k4() {
        let s = MergeScenario::new(4, Mode::ZeroSum, 1).unwrap();
        assert_eq!(s.label_map, vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(
            vecs(&build_initial_cons(&s)),
            vec![
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 1, 0],
                vec![0, 0, 1, 1]
            ]
        );
    }

    #[test]
    fn general_k4_merge_2() {
        let s = MergeScenario::new(4, Mode::General, 2).unwrap();
        assert_eq!(s.label_map, vec![vec![3], vec![1, 2], vec![4]]);
        assert_eq!(
            vecs(&build_initial_cons(&s)),
            vec![
                vec![0, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 1, 0],
                vec![1, 1, 0, 1]
            ]
        );
    }

    #[test]
    fn k3_has_two_vectors() {
        for s in scenarios(3, Mode::General).unwrap() {
            assert_eq!(build_initial_cons(&s).len(), 2);
        }
    }

    #[test]
    fn dropping_single_blocks() {
        let s = MergeScenario::new(5, Mode::ZeroSum, 1).unwrap();
        let all = build_initial_cons(&s);
        let multi = build_initial_cons_with(&s, InitialConsOptions { single_blocks: false });
        assert_eq!(all.len(), 5 * 4 / 2 - 1);
        assert_eq!(multi.len(), all.len() - 4);
    }

    #[test]
    fn zero_sum_merge_must_be_first() {
        assert!(MergeScenario::new(5, Mode::ZeroSum, 2).is_err());
        assert!(MergeScenario::new(5, Mode::General, 5).is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!(seed_rows(Mode::ZeroSum, 4), vec![IntVector::from_i64s(&[1, 1, 1, 1])]);
        assert!(seed_rows(Mode::General, 4).is_empty());
        assert_eq!(
            seed_rows(Mode::ZeroSumNoInverse, 5),
            vec![IntVector::from_i64s(&[1; 5])]
        );
    }
}
