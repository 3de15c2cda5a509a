use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{AssociationSet, LemmaDictionary, RespondentTable};
use crate::demographics::Attribute;
use crate::error::Result;

/// Label used in respondent counts for an unknown or empty attribute value.
pub const UNKNOWN_LABEL: &str = "unknown";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    /// Distinct respondent ids.
    pub questionnaires: usize,
    pub responses: usize,
    pub distinct_stimuli: usize,
    pub distinct_stimulus_lemmas: usize,
    pub distinct_responses: usize,
    pub distinct_response_lemmas: usize,
    /// Most frequent responses (surface form), ties broken by word.
    pub top_responses: Vec<(String, usize)>,
    /// attribute → value → respondent count; empty without a respondent table.
    pub respondents_by_attribute: BTreeMap<String, BTreeMap<String, usize>>,
}

pub fn summarize(
    set: &AssociationSet,
    dict: &LemmaDictionary,
    respondents: Option<&RespondentTable>,
    top_k: usize,
) -> Result<DatasetSummary> {
    let ids: HashSet<&str> = set.iter().map(|r| r.respondent_id.as_str()).collect();
    let stimuli: HashSet<&str> = set.iter().map(|r| r.stimulus.as_str()).collect();
    let stimulus_lemmas: HashSet<&str> = stimuli.iter().map(|s| dict.lemmatize(s)).collect();
    let mut response_counts: HashMap<&str, usize> = HashMap::new();
    for r in set {
        *response_counts.entry(&r.response).or_default() += 1;
    }
    let response_lemmas: HashSet<String> = response_counts
        .keys()
        .map(|r| dict.lemmatize_phrase(r))
        .collect();

    let mut top: Vec<(String, usize)> = response_counts
        .iter()
        .map(|(w, &c)| (w.to_string(), c))
        .collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    top.truncate(top_k);

    let mut by_attribute = BTreeMap::new();
    if let Some(table) = respondents {
        let mut sorted_ids: Vec<&str> = ids.iter().copied().collect();
        sorted_ids.sort_unstable();
        for attribute in [
            Attribute::Gender,
            Attribute::Specialization,
            Attribute::Location,
        ] {
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for id in &sorted_ids {
                let label = attribute
                    .label(table.resolve(id)?)
                    .unwrap_or_else(|| UNKNOWN_LABEL.to_owned());
                *counts.entry(label).or_default() += 1;
            }
            by_attribute.insert(attribute.as_str().to_owned(), counts);
        }
    }

    Ok(DatasetSummary {
        questionnaires: ids.len(),
        responses: set.len(),
        distinct_stimuli: stimuli.len(),
        distinct_stimulus_lemmas: stimulus_lemmas.len(),
        distinct_responses: response_counts.len(),
        distinct_response_lemmas: response_lemmas.len(),
        top_responses: top,
        respondents_by_attribute: by_attribute,
    })
}
