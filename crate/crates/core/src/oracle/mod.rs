//! Brute-force checks on concrete finite abelian groups.

pub mod crossval;
pub mod group;
pub mod sequencing;
pub mod structure;

pub use crossval::{cross_validate_scenario, CrossValidationReport};
pub use group::{all_factorizations, Elem, FiniteAbelianGroup, GroupElement};
pub use sequencing::{check_graham_exhaustive, find_sequencing, is_sequencing, GrahamReport, DEFAULT_SUBSET_BUDGET};
pub use structure::{
    closed_under_distinct_sums, find_merge_pair, verify_characterization, verify_merge_pair_dichotomy,
    verify_translation_dichotomy, verify_translation_dichotomy_exhaustive, CharacterizationReport,
    MergePairReport, TranslationOutcome, TranslationReport,
};
