//! Syntagmatic and paradigmatic association scoring.
//!
//! Syntagmatic: an association counts as an ngram match when any of its
//! candidate ngrams (both directions, surface and lemma forms on each side)
//! has a corpus frequency; the dataset score sums `ln f` over matched
//! associations. Paradigmatic: associations whose lemmas are linked in the
//! thesaurus, counted per relation type.
//!
//! All percentages use the number of response events as denominator.

mod paradigmatic;
mod syntagmatic;

pub use paradigmatic::{classify_relation, relation_profile, RelationProfile, TypeCount};
pub use syntagmatic::{
    candidate_ngrams, match_frequency, syntagmatic_score, MatchResult, ScoreReport,
};

pub(crate) fn percent(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}
