//! Randomized instantiation of merge scenarios in concrete groups.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::group::{Elem, FiniteAbelianGroup};
use super::sequencing::find_sequencing;
use crate::compression::{build_initial_cons, MergeScenario};
use crate::error::{invalid, Result};
use crate::search::Mode;

/// Attempts per sample before it is counted as skipped.
pub const MAX_ATTEMPTS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    /// Elements of `A` by label: the merged pair first, then the rest.
    pub labels: Vec<Elem>,
    /// The sequencing of the compressed set.
    pub compressed: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationFailure {
    pub instance: Instance,
    /// Index into the forbidden-block list of the vector that summed to zero.
    pub zero_sum_block: Option<usize>,
    pub sequencing_found: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub group: String,
    pub k: usize,
    pub mode: Mode,
    pub merge_index: usize,
    pub seed: u64,
    pub samples: usize,
    pub validated: usize,
    pub skipped: usize,
    pub failures: Vec<CrossValidationFailure>,
}

impl CrossValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.validated == self.samples
    }
}

fn distinct_nonzero(set: &[Elem]) -> bool {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1]) && s.first().is_some_and(|&x| x != 0)
}

fn no_inverse_pairs(g: &FiniteAbelianGroup, set: &[Elem]) -> bool {
    set.iter().all(|&a| !set.contains(&g.neg(a)))
}

fn sample_instance(g: &FiniteAbelianGroup, scenario: &MergeScenario, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let n = g.order();
    let size = scenario.k - 1;
    let mut compressed: Vec<Elem> = (0..size).map(|_| rng.gen_range(1..n)).collect();
    if scenario.mode.is_zero_sum() {
        let rest = g.sum(compressed[..size - 1].iter().copied());
        compressed[size - 1] = g.neg(rest);
    }
    if !distinct_nonzero(&compressed) {
        return None;
    }
    compressed.shuffle(rng);
    let compressed = find_sequencing(g, &compressed)?;
    let m = scenario.merge_index - 1;
    let merged = compressed[m];
    let a1 = rng.gen_range(1..n);
    let a2 = g.sub(merged, a1);
    let mut labels = vec![a1, a2];
    labels.extend(compressed.iter().enumerate().filter(|&(i, _)| i != m).map(|(_, &x)| x));
    if !distinct_nonzero(&labels) || labels.contains(&merged) {
        return None;
    }
    if scenario.mode == Mode::ZeroSumNoInverse && !no_inverse_pairs(g, &labels) {
        return None;
    }
    Some(Instance { labels, compressed })
}

/// Samples instances of the merge premise for `scenario` in `g` and checks
/// that every forbidden block is nonzero and that `A` has a sequencing.
pub fn cross_validate_scenario(
    scenario: &MergeScenario,
    g: &FiniteAbelianGroup,
    samples: usize,
    seed: u64,
) -> Result<CrossValidationReport> {
    if g.order() < 3 {
        return Err(invalid("cross-validation needs a group of order at least 3"));
    }
    let cons = build_initial_cons(scenario);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrossValidationReport {
        group: g.to_string(),
        k: scenario.k,
        mode: scenario.mode,
        merge_index: scenario.merge_index,
        seed,
        samples,
        validated: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for _ in 0..samples {
        let Some(instance) = (0..MAX_ATTEMPTS).find_map(|_| sample_instance(g, scenario, &mut rng)) else {
            report.skipped += 1;
            continue;
        };
        let zero_sum_block = cons.masks().iter().position(|&mask| {
            let picked = instance.labels.iter().enumerate().filter(|&(l, _)| mask >> l & 1 == 1);
            g.sum(picked.map(|(_, &x)| x)) == 0
        });
        let sequencing_found = find_sequencing(g, &instance.labels).is_some();
        if zero_sum_block.is_some() || !sequencing_found {
            report.failures.push(CrossValidationFailure {
                instance,
                zero_sum_block,
                sequencing_found,
            });
        } else {
            report.validated += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sum_k6_mod13() {
        let sc = MergeScenario::new(6, Mode::ZeroSum, 1).unwrap();
        let r = cross_validate_scenario(&sc, &FiniteAbelianGroup::cyclic(13).unwrap(), 100, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.validated, 100);
    }

    #[test]
    fn general_k4_merge2_mod11() {
        let sc = MergeScenario::new(4, Mode::General, 2).unwrap();
        let r = cross_validate_scenario(&sc, &FiniteAbelianGroup::cyclic(11).unwrap(), 100, 1).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn degenerate_modulus_skips() {
        let sc = MergeScenario::new(6, Mode::ZeroSum, 1).unwrap();
        let r = cross_validate_scenario(&sc, &FiniteAbelianGroup::cyclic(3).unwrap(), 5, 0).unwrap();
        assert_eq!(r.skipped, 5);
        assert!(!r.passed());
    }

    #[test]
    fn same_seed_same_report() {
        let sc = MergeScenario::new(5, Mode::ZeroSumNoInverse, 1).unwrap();
        let g = FiniteAbelianGroup::cyclic(31).unwrap();
        let a = cross_validate_scenario(&sc, &g, 30, 99).unwrap();
        let b = cross_validate_scenario(&sc, &g, 30, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
    }
}
