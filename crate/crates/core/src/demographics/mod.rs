//! Respondent-level analysis: slicing by demographic attributes,
//! per-respondent aggregates grouped by attribute, gender normalization and
//! a two-sided permutation test on group means.

mod groups;
mod permutation;
mod slice;

pub use groups::{
    gender_normalized, normalize_over_gender, per_respondent_metric, respondent_means, GroupStats,
};
pub use permutation::{permutation_test, permutation_test_detailed, PermutationOutcome};
pub use slice::{slice, Attribute, SliceSpec};
