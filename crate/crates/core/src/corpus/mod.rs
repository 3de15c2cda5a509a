//! Loading and indexing of the tab-separated inputs: associations,
//! respondent demographics, ngram frequencies, the lemma dictionary and
//! thesaurus relations.
//!
//! All formats share the same conventions: UTF-8, one record per line, tab as
//! the only field separator, blank lines and lines starting with `#` ignored.
//! Every store is immutable once built.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

mod associations;
mod lemmas;
mod ngrams;
mod respondents;
mod thesaurus;

pub use associations::{AssociationRecord, AssociationSet};
pub use lemmas::LemmaDictionary;
pub use ngrams::NgramTable;
pub use respondents::{Gender, Respondent, RespondentTable};
pub use thesaurus::{RelationType, ThesaurusIndex};

/// Options shared by every loader.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoadOptions {
    /// Lowercase and NFC-normalize tokens (and free-text demographic fields).
    pub normalize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { normalize: true }
    }
}

impl LoadOptions {
    pub fn raw() -> Self {
        LoadOptions { normalize: false }
    }

    /// Apply the token policy to `s`.
    pub fn text(&self, s: &str) -> String {
        if self.normalize {
            s.to_lowercase().nfc().collect()
        } else {
            s.to_owned()
        }
    }
}

/// Case-folded comparison key used for free-text demographic values.
pub(crate) fn fold(s: &str) -> String {
    s.to_lowercase().nfc().collect()
}

/// Calls `f(line_number, fields)` for each data line of `reader`.
pub(crate) fn for_each_record<R, F>(reader: R, source_name: &str, mut f: F) -> Result<()>
where
    R: BufRead,
    F: FnMut(usize, Vec<&str>) -> Result<()>,
{
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        f(lineno, line.split('\t').collect())?;
    }
    Ok(())
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Splits a phrase on whitespace and rejoins it with single spaces.
pub(crate) fn tokens(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}
