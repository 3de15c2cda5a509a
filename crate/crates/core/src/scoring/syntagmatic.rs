use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::percent;
use crate::corpus::{AssociationRecord, AssociationSet, LemmaDictionary, NgramTable};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Best ngram match for one association.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult<'a> {
    pub record: &'a AssociationRecord,
    /// Maximum frequency over the candidate ngrams, 0 when none is attested.
    pub matched_frequency: u64,
    /// Lexicographically smallest candidate reaching `matched_frequency`;
    /// `None` iff the frequency is 0.
    pub matched_candidate: Option<Vec<String>>,
    /// `ln(matched_frequency)`, or 0 for unmatched associations.
    pub log_contribution: f64,
}

impl MatchResult<'_> {
    pub fn is_matched(&self) -> bool {
        self.matched_frequency > 0
    }
}

/// Dataset-level syntagmatic score.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    /// Sum of natural-log contributions.
    #[serde(rename = "s")]
    pub score: f64,
    #[serde(rename = "total")]
    pub total_responses: usize,
    #[serde(rename = "matched")]
    pub matched_count: usize,
    #[serde(rename = "match_rate_pct")]
    pub match_rate_percent: f64,
    /// `score / total_responses`, comparable across slices of different size.
    #[serde(rename = "mean_log")]
    pub mean_log_contribution: f64,
}

/// Candidate ngrams for an association: stimulus before or after the
/// response, with each side taken as-is or lemmatized. A one-word response
/// yields bigrams, a two-word response trigrams (the response stays a
/// contiguous unit), longer responses nothing.
pub fn candidate_ngrams(
    record: &AssociationRecord,
    dict: &LemmaDictionary,
) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    let surface: Vec<&str> = record.response_tokens().collect();
    if surface.len() > 2 {
        return out;
    }
    let lemmas: Vec<&str> = surface.iter().map(|t| dict.lemmatize(t)).collect();
    let stimuli = [record.stimulus.as_str(), dict.lemmatize(&record.stimulus)];

    for stimulus in stimuli {
        for response in [&surface, &lemmas] {
            let forward = std::iter::once(stimulus).chain(response.iter().copied());
            let backward = response.iter().copied().chain(std::iter::once(stimulus));
            out.insert(forward.map(str::to_owned).collect());
            out.insert(backward.map(str::to_owned).collect());
        }
    }
    out
}

/// Looks up every candidate ngram of `record` and keeps the highest frequency.
pub fn match_frequency<'a>(
    record: &'a AssociationRecord,
    table: &NgramTable,
    dict: &LemmaDictionary,
) -> MatchResult<'a> {
    let mut best: Option<(u64, Vec<String>)> = None;
    // BTreeSet iterates in lexicographic order, so strict `>` keeps the
    // smallest candidate among ties.
    for candidate in candidate_ngrams(record, dict) {
        let f = table.lookup(&candidate);
        if f > 0 && best.as_ref().is_none_or(|(bf, _)| f > *bf) {
            best = Some((f, candidate));
        }
    }
    match best {
        Some((f, c)) => MatchResult {
            record,
            matched_frequency: f,
            matched_candidate: Some(c),
            log_contribution: (f as f64).ln(),
        },
        None => MatchResult {
            record,
            matched_frequency: 0,
            matched_candidate: None,
            log_contribution: 0.0,
        },
    }
}

/// Smoothed sum of matched ngram log-frequencies over the whole set.
pub fn syntagmatic_score(
    set: &AssociationSet,
    table: &NgramTable,
    dict: &LemmaDictionary,
) -> Result<ScoreReport> {
    if set.is_empty() {
        return Err(Error::Empty("association set"));
    }
    let frequencies: Vec<u64> = set
        .records()
        .par_iter()
        .map(|r| match_frequency(r, table, dict).matched_frequency)
        .collect();
    Ok(report_from_frequencies(&frequencies))
}

pub(crate) fn report_from_frequencies(frequencies: &[u64]) -> ScoreReport {
    let contributions: Vec<f64> = frequencies
        .iter()
        .map(|&f| if f > 0 { (f as f64).ln() } else { 0.0 })
        .collect();
    let total = frequencies.len();
    let matched = frequencies.iter().filter(|&&f| f > 0).count();
    let score = pairwise_sum(&contributions);
    ScoreReport {
        score,
        total_responses: total,
        matched_count: matched,
        match_rate_percent: percent(matched, total),
        mean_log_contribution: score / total as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str, r: &str) -> AssociationRecord {
        AssociationRecord::new("r1", s, r)
    }

    fn seqs(items: &[&[&str]]) -> BTreeSet<Vec<String>> {
        items
            .iter()
            .map(|s| s.iter().map(|t| t.to_string()).collect())
            .collect()
    }

    #[test]
    fn identity_dictionary_collapses_to_two() {
        let got = candidate_ngrams(&rec("write", "letter"), &LemmaDictionary::identity());
        assert_eq!(got, seqs(&[&["write", "letter"], &["letter", "write"]]));
    }

    #[test]
    fn lemmatized_stimulus_adds_candidates() {
        let dict = LemmaDictionary::from_pairs([("wrote", "write")]).unwrap();
        let got = candidate_ngrams(&rec("wrote", "letter"), &dict);
        assert_eq!(
            got,
            seqs(&[
                &["wrote", "letter"],
                &["write", "letter"],
                &["letter", "wrote"],
                &["letter", "write"],
            ])
        );
    }

    #[test]
    fn eight_distinct_candidates_when_both_sides_inflect() {
        let dict =
            LemmaDictionary::from_pairs([("wrote", "write"), ("letters", "letter")]).unwrap();
        assert_eq!(candidate_ngrams(&rec("wrote", "letters"), &dict).len(), 8);
    }

    #[test]
    fn two_word_response_gives_trigrams() {
        let got = candidate_ngrams(&rec("morning", "very good"), &LemmaDictionary::identity());
        assert_eq!(
            got,
            seqs(&[&["morning", "very", "good"], &["very", "good", "morning"]])
        );
    }

    #[test]
    fn long_response_has_no_candidates() {
        assert!(candidate_ngrams(&rec("x", "a b c"), &LemmaDictionary::identity()).is_empty());
    }

    #[test]
    fn match_uses_backward_direction_and_max() {
        let table: NgramTable = [(vec!["face", "mouth"], 6)].into_iter().collect();
        let r = rec("mouth", "face");
        let m = match_frequency(&r, &table, &LemmaDictionary::identity());
        assert_eq!(m.matched_frequency, 6);
        assert_eq!(
            m.matched_candidate,
            Some(vec!["face".into(), "mouth".into()])
        );
        assert!((m.log_contribution - 6f64.ln()).abs() < 1e-15);

        let table: NgramTable = [(vec!["a", "b"], 3), (vec!["b", "a"], 9)]
            .into_iter()
            .collect();
        let r = rec("a", "b");
        assert_eq!(
            match_frequency(&r, &table, &LemmaDictionary::identity()).matched_frequency,
            9
        );
    }

    #[test]
    fn ties_pick_smallest_candidate() {
        let table: NgramTable = [(vec!["z", "a"], 5), (vec!["a", "z"], 5)]
            .into_iter()
            .collect();
        let r = rec("z", "a");
        let m = match_frequency(&r, &table, &LemmaDictionary::identity());
        assert_eq!(m.matched_candidate, Some(vec!["a".into(), "z".into()]));
    }

    #[test]
    fn unmatched_has_no_candidate() {
        let r = rec("medicine", "clinic");
        let m = match_frequency(&r, &NgramTable::default(), &LemmaDictionary::identity());
        assert_eq!(m.matched_frequency, 0);
        assert_eq!(m.matched_candidate, None);
        assert_eq!(m.log_contribution, 0.0);
        assert!(!m.is_matched());
    }

    #[test]
    fn empty_set_is_error_and_absent_set_scores_zero() {
        let dict = LemmaDictionary::identity();
        let table = NgramTable::default();
        assert!(syntagmatic_score(&AssociationSet::default(), &table, &dict).is_err());
        let set: AssociationSet = vec![rec("a", "b"), rec("c", "d")].into_iter().collect();
        let rep = syntagmatic_score(&set, &table, &dict).unwrap();
        assert_eq!(rep.score, 0.0);
        assert_eq!(rep.matched_count, 0);
        assert_eq!(rep.match_rate_percent, 0.0);
        assert_eq!(rep.total_responses, 2);
    }

    #[test]
    fn frequency_one_matches_but_adds_nothing() {
        let table: NgramTable = [(vec!["a", "b"], 1)].into_iter().collect();
        let set: AssociationSet = vec![rec("a", "b")].into_iter().collect();
        let rep = syntagmatic_score(&set, &table, &LemmaDictionary::identity()).unwrap();
        assert_eq!(rep.matched_count, 1);
        assert_eq!(rep.score, 0.0);
    }
}
