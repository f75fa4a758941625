//! Sequencing search and exhaustive checks of the sequencing conjecture.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::group::{Elem, FiniteAbelianGroup};
use crate::error::{Error, Result};

/// Default cap on the number of subsets an exhaustive check may visit.
pub const DEFAULT_SUBSET_BUDGET: u128 = 1 << 24;

/// Whether the given ordering has pairwise distinct partial sums, none of
/// them zero except possibly the last.
pub fn is_sequencing(g: &FiniteAbelianGroup, ordering: &[Elem]) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut p = 0;
    for (i, &a) in ordering.iter().enumerate() {
        p = g.add(p, a);
        if (p == 0 && i + 1 < ordering.len()) || !seen.insert(p) {
            return false;
        }
    }
    true
}

/// Depth-first search for a sequencing, filling positions left to right with
/// candidates in increasing element order.
pub fn find_sequencing(g: &FiniteAbelianGroup, set: &[Elem]) -> Option<Vec<Elem>> {
    let mut elems = set.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() || elems.contains(&0) {
        return None;
    }
    let n = elems.len();
    let mut used_sum = vec![false; g.order() as usize];
    let mut taken = vec![false; n];
    let mut order = Vec::with_capacity(n);

    fn dfs(
        g: &FiniteAbelianGroup,
        elems: &[Elem],
        p: Elem,
        used_sum: &mut [bool],
        taken: &mut [bool],
        order: &mut Vec<Elem>,
    ) -> bool {
        let n = elems.len();
        if order.len() == n {
            return true;
        }
        let last = order.len() + 1 == n;
        for i in 0..n {
            if taken[i] {
                continue;
            }
            let q = g.add(p, elems[i]);
            if used_sum[q as usize] || (q == 0 && !last) {
                continue;
            }
            taken[i] = true;
            used_sum[q as usize] = true;
            order.push(elems[i]);
            if dfs(g, elems, q, used_sum, taken, order) {
                return true;
            }
            order.pop();
            used_sum[q as usize] = false;
            taken[i] = false;
        }
        false
    }

    dfs(g, &elems, 0, &mut used_sum, &mut taken, &mut order).then_some(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrahamReport {
    pub group: String,
    pub size_cap: usize,
    pub subsets_checked: u64,
    /// Subsets with no sequencing (at most the first few are kept).
    pub counterexamples: Vec<Vec<Elem>>,
    pub counterexample_count: u64,
}

impl GrahamReport {
    pub fn passed(&self) -> bool {
        self.counterexample_count == 0
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of subsets of `G \ {0}` with size in `min_size..=max_size`.
pub fn subset_count(g: &FiniteAbelianGroup, min_size: usize, max_size: usize) -> u128 {
    let n = u128::from(g.order() - 1);
    (min_size..=max_size).fold(0u128, |acc, s| acc.saturating_add(binomial(n, s as u128)))
}

pub(crate) fn ensure_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            limit: budget,
        });
    }
    Ok(())
}

/// Calls `visit` on every subset of `G \ {0}` with size in
/// `min_size..=max_size`, in parallel over the smallest element, and sums
/// the returned counts.
pub(crate) fn fold_subsets<T, F>(g: &FiniteAbelianGroup, min_size: usize, max_size: usize, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[Elem]) -> Option<T> + Sync,
{
    fn rec<T, F: Fn(&[Elem]) -> Option<T>>(
        elems: &[Elem],
        start: usize,
        acc: &mut Vec<Elem>,
        min_size: usize,
        max_size: usize,
        visit: &F,
        out: &mut Vec<T>,
    ) {
        if acc.len() >= min_size {
            if let Some(t) = visit(acc) {
                out.push(t);
            }
        }
        if acc.len() == max_size {
            return;
        }
        for i in start..elems.len() {
            acc.push(elems[i]);
            rec(elems, i + 1, acc, min_size, max_size, visit, out);
            acc.pop();
        }
    }
    let elems = g.nonzero_elements();
    if max_size == 0 {
        return Vec::new();
    }
    (0..elems.len())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut acc = vec![elems[first]];
            rec(&elems, first + 1, &mut acc, min_size, max_size, &visit, &mut out);
            out
        })
        .flatten()
        .collect()
}

const KEPT_COUNTEREXAMPLES: usize = 16;

/// Checks that every nonempty `A ⊆ G \ {0}` with `|A| <= size_cap` has a
/// sequencing.
pub fn check_graham_exhaustive(g: &FiniteAbelianGroup, size_cap: usize, budget: u128) -> Result<GrahamReport> {
    let cap = size_cap.min(g.order() as usize - 1);
    ensure_budget(subset_count(g, 1, cap), budget)?;
    let bad = fold_subsets(g, 1, cap, |a| find_sequencing(g, a).is_none().then(|| a.to_vec()));
    Ok(GrahamReport {
        group: g.to_string(),
        size_cap: cap,
        subsets_checked: subset_count(g, 1, cap) as u64,
        counterexample_count: bad.len() as u64,
        counterexamples: bad.into_iter().take(KEPT_COUNTEREXAMPLES).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn unpruned_exists(g: &FiniteAbelianGroup, set: &[Elem]) -> bool {
        set.iter().copied().permutations(set.len()).any(|p| is_sequencing(g, &p))
    }

    #[test]
    fn z7_example() {
        let g = z(7);
        assert!(is_sequencing(&g, &[2, 3, 1]));
        let found = find_sequencing(&g, &[1, 2, 3]).unwrap();
        assert!(is_sequencing(&g, &found));
        assert_eq!(found.iter().sorted().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn klein_example() {
        let g: FiniteAbelianGroup = "Z2xZ2".parse().unwrap();
        let a = [g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap(), g.element(&[1, 1]).unwrap()];
        assert!(is_sequencing(&g, &a));
        assert!(find_sequencing(&g, &a).is_some());
    }

    #[test]
    fn singleton_and_invalid() {
        let g = z(5);
        assert_eq!(find_sequencing(&g, &[3]), Some(vec![3]));
        assert_eq!(find_sequencing(&g, &[0, 1]), None);
        assert!(!is_sequencing(&g, &[1, 4, 2]));
    }

    #[test]
    fn pruning_is_lossless() {
        for g in [z(6), z(8), z(9), "Z2xZ4".parse().unwrap(), "Z3xZ3".parse().unwrap()] {
            fold_subsets(&g, 1, 6, |a| {
                assert_eq!(find_sequencing(&g, a).is_some(), unpruned_exists(&g, a), "{:?}", a);
                None::<()>
            });
        }
    }

    #[test]
    fn early_zero_sum_rejected() {
        let g = z(6);
        assert!(unpruned_exists(&g, &[1, 5]));
        assert!(!is_sequencing(&g, &[1, 5, 2]));
    }

    #[test]
    fn graham_small() {
        let r = check_graham_exhaustive(&z(7), 6, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(r.subsets_checked, 63);
        assert!(r.passed());
        let r = check_graham_exhaustive(&"Z2xZ2".parse().unwrap(), 3, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(r.subsets_checked, 7);
        assert!(r.passed());
        let r = check_graham_exhaustive(&z(2), 1, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(r.subsets_checked, 1);
    }

    #[test]
    fn graham_budget_refusal() {
        let err = check_graham_exhaustive(&z(64), 63, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: 1000, .. }));
    }
}
