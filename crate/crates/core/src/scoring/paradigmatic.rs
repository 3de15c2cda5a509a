use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::percent;
use crate::corpus::{
    AssociationRecord, AssociationSet, LemmaDictionary, RelationType, ThesaurusIndex,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeCount {
    pub count: usize,
    #[serde(rename = "pct")]
    pub percent: f64,
}

impl TypeCount {
    fn new(count: usize, total: usize) -> Self {
        TypeCount {
            count,
            percent: percent(count, total),
        }
    }
}

/// Per-relation counts over a set of associations. A pair can carry several
/// relation types, so the per-type percentages need not sum to 100.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationProfile {
    #[serde(rename = "total")]
    pub total_responses: usize,
    /// One entry for every [`RelationType`], zero counts included.
    pub relations: BTreeMap<RelationType, TypeCount>,
    /// Responses with no relation at all.
    pub unclassified: TypeCount,
}

impl RelationProfile {
    pub fn count(&self, rel: RelationType) -> usize {
        self.relations.get(&rel).map_or(0, |c| c.count)
    }

    pub fn percent(&self, rel: RelationType) -> f64 {
        self.relations.get(&rel).map_or(0.0, |c| c.percent)
    }

    pub fn unclassified_percent(&self) -> f64 {
        self.unclassified.percent
    }
}

/// Relation types linking the lemmatized stimulus to the lemmatized
/// response, reported from the stimulus side. Multi-word responses are looked
/// up as one lemmatized string.
pub fn classify_relation(
    record: &AssociationRecord,
    thesaurus: &ThesaurusIndex,
    dict: &LemmaDictionary,
) -> BTreeSet<RelationType> {
    let stimulus = dict.lemmatize(&record.stimulus);
    let response = dict.lemmatize_phrase(&record.response);
    thesaurus.relations(stimulus, &response)
}

pub fn relation_profile(
    set: &AssociationSet,
    thesaurus: &ThesaurusIndex,
    dict: &LemmaDictionary,
) -> Result<RelationProfile> {
    if set.is_empty() {
        return Err(Error::Empty("association set"));
    }
    let mut counts: BTreeMap<RelationType, usize> =
        RelationType::ALL.iter().map(|&t| (t, 0)).collect();
    let mut unclassified = 0;
    for record in set {
        let rels = classify_relation(record, thesaurus, dict);
        if rels.is_empty() {
            unclassified += 1;
        }
        for rel in rels {
            *counts.entry(rel).or_default() += 1;
        }
    }
    let total = set.len();
    Ok(RelationProfile {
        total_responses: total,
        relations: counts
            .into_iter()
            .map(|(t, c)| (t, TypeCount::new(c, total)))
            .collect(),
        unclassified: TypeCount::new(unclassified, total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::LoadOptions;

    fn thesaurus(text: &str) -> ThesaurusIndex {
        ThesaurusIndex::from_reader(text.as_bytes(), "t", &LoadOptions::default()).unwrap()
    }

    fn rec(s: &str, r: &str) -> AssociationRecord {
        AssociationRecord::new("r", s, r)
    }

    #[test]
    fn classifies_from_stimulus_side() {
        let t = thesaurus("russia\tcountry\thyponymy\nhere\tthere\tantonymy\n");
        let d = LemmaDictionary::identity();
        assert_eq!(
            classify_relation(&rec("russia", "country"), &t, &d),
            BTreeSet::from([RelationType::Hyponymy])
        );
        assert_eq!(
            classify_relation(&rec("country", "russia"), &t, &d),
            BTreeSet::from([RelationType::Hypernymy])
        );
        assert_eq!(
            classify_relation(&rec("here", "there"), &t, &d),
            BTreeSet::from([RelationType::Antonymy])
        );
        assert!(classify_relation(&rec("yellow", "colour"), &t, &d).is_empty());
    }

    #[test]
    fn uses_lemmas() {
        let t = thesaurus("ask\tanswer\tantonymy\n");
        let d = LemmaDictionary::from_pairs([("asked", "ask"), ("answers", "answer")]).unwrap();
        assert_eq!(
            classify_relation(&rec("asked", "answers"), &t, &d),
            classify_relation(&rec("ask", "answer"), &t, &d)
        );
        // multi-word response looked up as a whole
        let t = thesaurus("money\tno money\tantonymy\n");
        assert!(
            !classify_relation(&rec("money", "no money"), &t, &LemmaDictionary::identity())
                .is_empty()
        );
        assert!(
            classify_relation(&rec("money", "no cash"), &t, &LemmaDictionary::identity())
                .is_empty()
        );
    }

    #[test]
    fn multi_label_pair_counts_under_each_type() {
        let t = thesaurus("a\tb\tsynonymy\na\tb\thyponymy\n");
        let set: AssociationSet = vec![rec("a", "b"), rec("c", "d")].into_iter().collect();
        let p = relation_profile(&set, &t, &LemmaDictionary::identity()).unwrap();
        assert_eq!(p.count(RelationType::Synonymy), 1);
        assert_eq!(p.count(RelationType::Hyponymy), 1);
        assert_eq!(p.unclassified.count, 1);
        assert_eq!(p.percent(RelationType::Synonymy), 50.0);
        assert_eq!(p.relations.len(), RelationType::ALL.len());
    }

    #[test]
    fn no_relations_and_empty_set() {
        let t = ThesaurusIndex::default();
        let set: AssociationSet = vec![rec("a", "b")].into_iter().collect();
        let p = relation_profile(&set, &t, &LemmaDictionary::identity()).unwrap();
        assert!(p.relations.values().all(|c| c.count == 0));
        assert_eq!(p.unclassified_percent(), 100.0);
        assert!(
            relation_profile(&AssociationSet::default(), &t, &LemmaDictionary::identity()).is_err()
        );
    }
}
