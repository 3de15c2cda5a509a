use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::{for_each_record, open, tokens, LoadOptions};
use crate::error::{Error, Result};

/// Longest token sequence the table stores.
pub const MAX_NGRAM: usize = 3;

/// Corpus frequencies for token sequences of length 1 to 3.
///
/// Absent sequences have frequency 0; stored frequencies are always positive.
#[derive(Clone, Debug, Default)]
pub struct NgramTable {
    entries: HashMap<Vec<String>, u64>,
}

impl NgramTable {
    /// Loads `tok1[ tok2[ tok3]] \t count` lines. Repeated sequences add up.
    pub fn load(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        Self::from_reader(open(path)?, &path.display().to_string(), opts)
    }

    pub fn from_reader<R: BufRead>(
        reader: R,
        source_name: &str,
        opts: &LoadOptions,
    ) -> Result<Self> {
        let mut table = NgramTable::default();
        for_each_record(reader, source_name, |lineno, fields| {
            let err = |msg: String| Error::parse(source_name, lineno, msg);
            if fields.len() != 2 {
                return Err(err(format!("expected 2 fields, found {}", fields.len())));
            }
            let seq: Vec<String> = tokens(fields[0])
                .into_iter()
                .map(|t| opts.text(t))
                .collect();
            if seq.is_empty() {
                return Err(err("empty ngram".into()));
            }
            if seq.len() > MAX_NGRAM {
                return Err(err(format!(
                    "{} tokens; at most {MAX_NGRAM} allowed",
                    seq.len()
                )));
            }
            let raw = fields[1].trim();
            let count = raw
                .parse::<u64>()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| err(format!("count `{raw}` is not a positive integer")))?;
            table.add(seq, count);
            Ok(())
        })?;
        Ok(table)
    }

    fn add(&mut self, seq: Vec<String>, count: u64) {
        let slot = self.entries.entry(seq).or_insert(0);
        *slot = slot.saturating_add(count);
    }

    /// Frequency of `seq`, 0 if absent.
    pub fn lookup<S: AsRef<str>>(&self, seq: &[S]) -> u64 {
        if seq.is_empty() || seq.len() > MAX_NGRAM {
            return 0;
        }
        let key: Vec<String> = seq.iter().map(|s| s.as_ref().to_owned()).collect();
        self.entries.get(&key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], u64)> {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }
}

impl<S: AsRef<str>> FromIterator<(Vec<S>, u64)> for NgramTable {
    /// Zero counts are dropped, repeated sequences add up.
    fn from_iter<T: IntoIterator<Item = (Vec<S>, u64)>>(iter: T) -> Self {
        let mut table = NgramTable::default();
        for (seq, count) in iter {
            if count > 0 && !seq.is_empty() && seq.len() <= MAX_NGRAM {
                table.add(seq.iter().map(|s| s.as_ref().to_owned()).collect(), count);
            }
        }
        table
    }
}
