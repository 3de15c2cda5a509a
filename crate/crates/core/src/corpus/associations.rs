use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{for_each_record, open, tokens, LoadOptions, RespondentTable};
use crate::error::{Error, Result};

/// One stimulus → response event produced by a respondent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssociationRecord {
    pub respondent_id: String,
    pub stimulus: String,
    /// Tokens separated by single spaces.
    pub response: String,
}

impl AssociationRecord {
    pub fn new(
        respondent_id: impl Into<String>,
        stimulus: impl Into<String>,
        response: impl Into<String>,
    ) -> Self {
        AssociationRecord {
            respondent_id: respondent_id.into(),
            stimulus: stimulus.into(),
            response: response.into(),
        }
    }

    pub fn response_tokens(&self) -> impl Iterator<Item = &str> {
        self.response.split(' ')
    }

    pub fn response_len(&self) -> usize {
        self.response_tokens().count()
    }
}

/// File-ordered collection of association records. Repeated records are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssociationSet {
    records: Vec<AssociationRecord>,
}

impl AssociationSet {
    pub fn new(records: Vec<AssociationRecord>) -> Self {
        AssociationSet { records }
    }

    /// Loads `respondent_id \t stimulus \t response` lines.
    ///
    /// When `respondents` is given every respondent id must resolve in it.
    pub fn load(
        path: impl AsRef<Path>,
        opts: &LoadOptions,
        respondents: Option<&RespondentTable>,
    ) -> Result<Self> {
        let path = path.as_ref();
        Self::from_reader(open(path)?, &path.display().to_string(), opts, respondents)
    }

    pub fn from_reader<R: BufRead>(
        reader: R,
        source_name: &str,
        opts: &LoadOptions,
        respondents: Option<&RespondentTable>,
    ) -> Result<Self> {
        let mut records = Vec::new();
        for_each_record(reader, source_name, |lineno, fields| {
            let err = |msg: String| Error::parse(source_name, lineno, msg);
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let id = fields[0].trim();
            let stimulus = fields[1].trim();
            let response = tokens(fields[2]).join(" ");
            if id.is_empty() {
                return Err(err("empty respondent id".into()));
            }
            if stimulus.is_empty() {
                return Err(err("empty stimulus".into()));
            }
            if stimulus.chars().any(char::is_whitespace) {
                return Err(err(format!("stimulus `{stimulus}` contains whitespace")));
            }
            if response.is_empty() {
                return Err(err("empty response".into()));
            }
            if let Some(table) = respondents {
                if table.get(id).is_none() {
                    return Err(err(format!("unknown respondent id `{id}`")));
                }
            }
            records.push(AssociationRecord::new(
                id,
                opts.text(stimulus),
                opts.text(&response),
            ));
            Ok(())
        })?;
        Ok(AssociationSet { records })
    }

    /// Writes the set in the same format [`AssociationSet::load`] reads.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for r in &self.records {
            writeln!(out, "{}\t{}\t{}", r.respondent_id, r.stimulus, r.response)?;
        }
        Ok(())
    }

    pub fn records(&self) -> &[AssociationRecord] {
        &self.records
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AssociationRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

impl FromIterator<AssociationRecord> for AssociationSet {
    fn from_iter<T: IntoIterator<Item = AssociationRecord>>(iter: T) -> Self {
        AssociationSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a AssociationSet {
    type Item = &'a AssociationRecord;
    type IntoIter = std::slice::Iter<'a, AssociationRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}
