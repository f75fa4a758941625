//! Sum-closed subsets, merge pairs and the translation dichotomy.

use serde::{Deserialize, Serialize};

use super::group::{Elem, FiniteAbelianGroup};
use super::sequencing::{ensure_budget, fold_subsets, subset_count};
use crate::error::{invalid, Result};

fn membership(g: &FiniteAbelianGroup, set: &[Elem]) -> Vec<bool> {
    let mut m = vec![false; g.order() as usize];
    m[0] = true;
    for &e in set {
        m[e as usize] = true;
    }
    m
}

fn with_zero(set: &[Elem]) -> Vec<Elem> {
    let mut b = set.to_vec();
    b.push(0);
    b
}

/// True iff `a + b ∈ A ∪ {0}` for all distinct `a, b ∈ A`.
pub fn closed_under_distinct_sums(g: &FiniteAbelianGroup, set: &[Elem]) -> bool {
    find_merge_pair(g, set).is_none()
}

/// First pair `(x1, x2)` of distinct elements, scanned in list order, with
/// `x1 + x2 ∉ A ∪ {0}`.
pub fn find_merge_pair(g: &FiniteAbelianGroup, set: &[Elem]) -> Option<(Elem, Elem)> {
    let member = membership(g, set);
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if !member[g.add(a, b) as usize] {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub group: String,
    pub subsets_checked: u64,
    /// Sum-closed sets of size at least 2.
    pub closed_sets: Vec<Vec<Elem>>,
    /// Sum-closed pairs `{x, -x}` with `3x != 0`: closed under distinct
    /// sums, yet `{0, x, -x}` is not a subgroup because `x + x` escapes.
    pub pair_exceptions: Vec<Vec<Elem>>,
    /// Any other sum-closed set whose union with `{0}` is not a subgroup.
    pub violations: Vec<Vec<Elem>>,
}

impl CharacterizationReport {
    /// The statement holds for every `|A| >= 2`.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.pair_exceptions.is_empty()
    }

    /// The statement holds for every `|A| >= 3`.
    pub fn passed_from_three(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every sum-closed `A ⊆ G \ {0}` with `|A| >= 2` gives a
/// subgroup `A ∪ {0}`.
pub fn verify_characterization(g: &FiniteAbelianGroup, budget: u128) -> Result<CharacterizationReport> {
    let max = g.order() as usize - 1;
    let required = subset_count(g, 2, max);
    ensure_budget(required, budget)?;
    let closed = fold_subsets(g, 2, max, |a| {
        closed_under_distinct_sums(g, a).then(|| (a.to_vec(), g.is_subgroup(&with_zero(a))))
    });
    let mut closed_sets: Vec<Vec<Elem>> = Vec::new();
    let (mut pair_exceptions, mut violations) = (Vec::new(), Vec::new());
    for (set, ok) in closed {
        if !ok {
            if set.len() == 2 {
                pair_exceptions.push(set.clone());
            } else {
                violations.push(set.clone());
            }
        }
        closed_sets.push(set);
    }
    closed_sets.sort();
    pair_exceptions.sort();
    violations.sort();
    Ok(CharacterizationReport {
        group: g.to_string(),
        subsets_checked: required as u64,
        closed_sets,
        pair_exceptions,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergePairReport {
    pub group: String,
    pub subsets_checked: u64,
    pub subgroup_cases: u64,
    pub merge_pair_cases: u64,
    /// Pairs `{x, -x}` with no merge pair although `{0, x, -x}` is not a
    /// subgroup.
    pub pair_exceptions: Vec<Vec<Elem>>,
    /// Any other set where "no merge pair" and "A ∪ {0} is a subgroup" disagree.
    pub violations: Vec<Vec<Elem>>,
}

impl MergePairReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.pair_exceptions.is_empty()
    }

    pub fn passed_from_three(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every `A ⊆ G \ {0}` with `|A| >= 2`: no merge pair exists iff
/// `A ∪ {0}` is a subgroup.
pub fn verify_merge_pair_dichotomy(g: &FiniteAbelianGroup, budget: u128) -> Result<MergePairReport> {
    let max = g.order() as usize - 1;
    let required = subset_count(g, 2, max);
    ensure_budget(required, budget)?;
    let outcomes = fold_subsets(g, 2, max, |a| {
        let none = find_merge_pair(g, a).is_none();
        let sub = g.is_subgroup(&with_zero(a));
        Some((none, none != sub, a.to_vec()))
    });
    let mut report = MergePairReport {
        group: g.to_string(),
        subsets_checked: required as u64,
        subgroup_cases: 0,
        merge_pair_cases: 0,
        pair_exceptions: Vec::new(),
        violations: Vec::new(),
    };
    for (none, bad, set) in outcomes {
        if none {
            report.subgroup_cases += 1;
        } else {
            report.merge_pair_cases += 1;
        }
        if bad && set.len() == 2 {
            report.pair_exceptions.push(set);
        } else if bad {
            report.violations.push(set);
        }
    }
    report.pair_exceptions.sort();
    report.violations.sort();
    Ok(report)
}

/// How `A` behaves under translation by one of its elements `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TranslationOutcome {
    /// Some other element `b` has `a + b ∉ A ∪ {0}`.
    Escapes { partner: Elem },
    /// `A ∪ {0} = {a, 0, -a, ..., -s·a} ∪ M`, with `M` a union of cosets of
    /// `<a>` listed by their smallest element.
    Chain { s: usize, cosets: Vec<Elem> },
}

/// Decides which case of the translation dichotomy holds for `A ⊆ Z_m` and
/// the element at `index`; `Ok(None)` reports that neither does.
pub fn verify_translation_dichotomy(
    g: &FiniteAbelianGroup,
    set: &[Elem],
    index: usize,
) -> Result<Option<TranslationOutcome>> {
    if !g.is_cyclic_presentation() {
        return Err(invalid(format!("translation dichotomy needs a cyclic group, got {g}")));
    }
    let a = *set
        .get(index)
        .ok_or_else(|| invalid(format!("index {index} out of range for a set of size {}", set.len())))?;
    let member = membership(g, set);
    if let Some(&b) = set
        .iter()
        .enumerate()
        .find(|&(j, &b)| j != index && !member[g.add(a, b) as usize])
        .map(|(_, b)| b)
    {
        return Ok(Some(TranslationOutcome::Escapes { partner: b }));
    }

    let k = set.len();
    let m = g.order();
    // Members of <a>, walking 0, -a, -2a, ... until the first gap.
    let mut s = 0;
    let mut cur = g.neg(a);
    while cur != 0 && cur != a && member[cur as usize] {
        s += 1;
        cur = g.sub(cur, a);
    }
    let mut chain = vec![false; m as usize];
    chain[a as usize] = true;
    chain[0] = true;
    let mut c = 0;
    for _ in 0..s {
        c = g.sub(c, a);
        chain[c as usize] = true;
    }
    let in_subgroup = |x: Elem| {
        let mut y = 0;
        loop {
            if y == x {
                return true;
            }
            y = g.add(y, a);
            if y == 0 {
                return false;
            }
        }
    };
    let mut cosets = Vec::new();
    let mut seen = vec![false; m as usize];
    for x in 0..m {
        if seen[x as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut y = x;
        loop {
            seen[y as usize] = true;
            coset.push(y);
            y = g.add(y, a);
            if y == x {
                break;
            }
        }
        if in_subgroup(x) {
            if coset.iter().any(|&y| member[y as usize] != chain[y as usize]) {
                return Ok(None);
            }
        } else {
            let inside = coset.iter().filter(|&&y| member[y as usize]).count();
            if inside == coset.len() {
                cosets.push(x);
            } else if inside != 0 {
                return Ok(None);
            }
        }
    }
    if s >= k || (cosets.is_empty() && s != k - 1) {
        return Ok(None);
    }
    Ok(Some(TranslationOutcome::Chain { s, cosets }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub group: String,
    pub cases_checked: u64,
    pub escapes: u64,
    pub chains: u64,
    pub violations: Vec<(Vec<Elem>, Elem)>,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the translation dichotomy for every nonempty `A ⊆ Z_m \ {0}` and
/// every element of `A`.
pub fn verify_translation_dichotomy_exhaustive(g: &FiniteAbelianGroup, budget: u128) -> Result<TranslationReport> {
    if !g.is_cyclic_presentation() {
        return Err(invalid(format!("translation dichotomy needs a cyclic group, got {g}")));
    }
    let max = g.order() as usize - 1;
    let required = subset_count(g, 1, max);
    ensure_budget(required, budget)?;
    let per_set = fold_subsets(g, 1, max, |set| {
        let outcomes: Vec<_> = (0..set.len())
            .map(|i| (set[i], verify_translation_dichotomy(g, set, i).expect("cyclic group")))
            .collect();
        Some((set.to_vec(), outcomes))
    });
    let mut report = TranslationReport {
        group: g.to_string(),
        cases_checked: 0,
        escapes: 0,
        chains: 0,
        violations: Vec::new(),
    };
    for (set, outcomes) in per_set {
        for (a, o) in outcomes {
            report.cases_checked += 1;
            match o {
                Some(TranslationOutcome::Escapes { .. }) => report.escapes += 1,
                Some(TranslationOutcome::Chain { .. }) => report.chains += 1,
                None => report.violations.push((set.clone(), a)),
            }
        }
    }
    report.violations.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sequencing::DEFAULT_SUBSET_BUDGET;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert!(closed_under_distinct_sums(&z(6), &[2, 4]));
        assert!(!closed_under_distinct_sums(&z(6), &[1, 2]));
        assert!(closed_under_distinct_sums(&z(4), &[1, 2, 3]));
    }

    #[test]
    fn characterization_z6() {
        let r = verify_characterization(&z(6), DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(r.subsets_checked, 26);
        assert_eq!(r.closed_sets, vec![vec![1, 2, 3, 4, 5], vec![1, 5], vec![2, 4]]);
        // 1 + 5 = 0 closes {1, 5}, but 1 + 1 = 2 leaves {0, 1, 5}.
        assert_eq!(r.pair_exceptions, vec![vec![1, 5]]);
        assert!(!r.passed());
        assert!(r.passed_from_three());
    }

    #[test]
    fn characterization_small_groups() {
        let g: FiniteAbelianGroup = "Z2xZ2".parse().unwrap();
        let r = verify_characterization(&g, DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(r.closed_sets.contains(&vec![1, 2, 3]));
        assert!(g.is_subgroup(&[0, 1, 2, 3]));
        assert!(r.passed());
        let r = verify_characterization(&z(3), DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(r.closed_sets, vec![vec![1, 2]]);
        assert!(r.passed());
    }

    #[test]
    fn merge_pair_examples() {
        assert_eq!(find_merge_pair(&z(6), &[1, 2]), Some((1, 2)));
        assert_eq!(find_merge_pair(&z(6), &[2, 4]), None);
        assert_eq!(find_merge_pair(&z(5), &[1, 2, 4]), Some((1, 2)));
        let r = verify_merge_pair_dichotomy(&z(8), DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(r.passed_from_three());
        assert_eq!(r.pair_exceptions, vec![vec![1, 7], vec![2, 6], vec![3, 5]]);
        let r = verify_merge_pair_dichotomy(&"Z2xZ2xZ2".parse().unwrap(), DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn translation_examples() {
        assert_eq!(
            verify_translation_dichotomy(&z(6), &[1, 2], 0).unwrap(),
            Some(TranslationOutcome::Escapes { partner: 2 })
        );
        assert_eq!(
            verify_translation_dichotomy(&z(6), &[2, 4], 0).unwrap(),
            Some(TranslationOutcome::Chain { s: 1, cosets: vec![] })
        );
        assert_eq!(
            verify_translation_dichotomy(&z(4), &[1, 2, 3], 0).unwrap(),
            Some(TranslationOutcome::Chain { s: 2, cosets: vec![] })
        );
        // {3} ∪ {1, 4} in Z6: <3> = {0, 3}, chain s = 0, coset {1, 4} full.
        assert_eq!(
            verify_translation_dichotomy(&z(6), &[3, 1, 4], 0).unwrap(),
            Some(TranslationOutcome::Chain { s: 0, cosets: vec![1] })
        );
        assert!(verify_translation_dichotomy(&"Z2xZ2".parse().unwrap(), &[1], 0).is_err());
    }

    #[test]
    fn translation_exhaustive_small() {
        for m in 2..=12 {
            let r = verify_translation_dichotomy_exhaustive(&z(m), DEFAULT_SUBSET_BUDGET).unwrap();
            assert!(r.passed(), "Z{m}: {:?}", r.violations);
        }
    }
}
