use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{for_each_record, open, tokens, LoadOptions};
use crate::error::{Error, Result};

/// Thesaurus relation between two lemmas, read from the first lemma's side:
/// `(a, b, Hyponymy)` means `a` is a hyponym of `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationType {
    Synonymy,
    Antonymy,
    Hypernymy,
    Hyponymy,
    Meronymy,
    Holonymy,
    CauseEffect,
    Domain,
}

impl RelationType {
    pub const ALL: [RelationType; 8] = [
        RelationType::Synonymy,
        RelationType::Antonymy,
        RelationType::Hypernymy,
        RelationType::Hyponymy,
        RelationType::Meronymy,
        RelationType::Holonymy,
        RelationType::CauseEffect,
        RelationType::Domain,
    ];

    /// The relation as seen from the other lemma.
    ///
    /// Cause/effect and domain have no separate inverse label and are
    /// reported unchanged from both sides.
    pub fn inverse(self) -> Self {
        use RelationType::*;
        match self {
            Hypernymy => Hyponymy,
            Hyponymy => Hypernymy,
            Meronymy => Holonymy,
            Holonymy => Meronymy,
            other => other,
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, RelationType::Synonymy | RelationType::Antonymy)
    }

    pub fn as_str(self) -> &'static str {
        use RelationType::*;
        match self {
            Synonymy => "synonymy",
            Antonymy => "antonymy",
            Hypernymy => "hypernymy",
            Hyponymy => "hyponymy",
            Meronymy => "meronymy",
            Holonymy => "holonymy",
            CauseEffect => "cause_effect",
            Domain => "domain",
        }
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown relation type `{s}`")))
    }
}

/// Typed lemma-pair relations, closed under symmetry and inversion so that
/// any pair can be queried from either side.
#[derive(Clone, Debug, Default)]
pub struct ThesaurusIndex {
    pairs: HashMap<(String, String), BTreeSet<RelationType>>,
    triples: usize,
}

impl ThesaurusIndex {
    pub fn load(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        Self::from_reader(open(path)?, &path.display().to_string(), opts)
    }

    /// Reads `lemma_a \t lemma_b \t relation_type` lines.
    pub fn from_reader<R: BufRead>(
        reader: R,
        source_name: &str,
        opts: &LoadOptions,
    ) -> Result<Self> {
        let mut index = ThesaurusIndex::default();
        for_each_record(reader, source_name, |lineno, fields| {
            let err = |msg: String| Error::parse(source_name, lineno, msg);
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let a = opts.text(&tokens(fields[0]).join(" "));
            let b = opts.text(&tokens(fields[1]).join(" "));
            if a.is_empty() || b.is_empty() {
                return Err(err("empty lemma".into()));
            }
            let rel: RelationType = fields[2]
                .trim()
                .parse()
                .map_err(|e: Error| err(e.to_string()))?;
            index.insert(a, b, rel);
            Ok(())
        })?;
        Ok(index)
    }

    pub fn insert(&mut self, a: impl Into<String>, b: impl Into<String>, rel: RelationType) {
        let (a, b) = (a.into(), b.into());
        self.triples += 1;
        self.pairs
            .entry((b.clone(), a.clone()))
            .or_default()
            .insert(rel.inverse());
        self.pairs.entry((a, b)).or_default().insert(rel);
    }

    /// Relations linking `a` to `b`, from `a`'s side.
    pub fn relations(&self, a: &str, b: &str) -> BTreeSet<RelationType> {
        // Owned key lookup; the index is small relative to scoring work.
        self.pairs
            .get(&(a.to_owned(), b.to_owned()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn contains(&self, a: &str, b: &str, rel: RelationType) -> bool {
        self.pairs
            .get(&(a.to_owned(), b.to_owned()))
            .is_some_and(|s| s.contains(&rel))
    }

    /// Number of triples loaded (before closure).
    pub fn triple_count(&self) -> usize {
        self.triples
    }

    /// Every queryable `(a, b, relation)` after closure.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, RelationType)> {
        self.pairs
            .iter()
            .flat_map(|((a, b), rels)| rels.iter().map(move |r| (a.as_str(), b.as_str(), *r)))
    }
}

impl FromIterator<(String, String, RelationType)> for ThesaurusIndex {
    fn from_iter<T: IntoIterator<Item = (String, String, RelationType)>>(iter: T) -> Self {
        let mut index = ThesaurusIndex::default();
        for (a, b, r) in iter {
            index.insert(a, b, r);
        }
        index
    }
}
