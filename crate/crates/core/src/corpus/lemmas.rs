use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::{for_each_record, open, LoadOptions};
use crate::error::{Error, Result};

/// Surface → lemma map standing in for a morphological analyzer.
///
/// Lookup is total: a surface without an entry is its own lemma. Every lemma
/// is a fixed point (it maps to itself or has no entry), so lemmatizing twice
/// is the same as lemmatizing once.
#[derive(Clone, Debug, Default)]
pub struct LemmaDictionary {
    entries: HashMap<String, String>,
}

impl LemmaDictionary {
    /// An empty dictionary: every token is its own lemma.
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn load(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        Self::from_reader(open(path)?, &path.display().to_string(), opts)
    }

    /// Reads `surface \t lemma` lines.
    pub fn from_reader<R: BufRead>(
        reader: R,
        source_name: &str,
        opts: &LoadOptions,
    ) -> Result<Self> {
        let mut entries: HashMap<String, String> = HashMap::new();
        let mut first_seen: HashMap<String, usize> = HashMap::new();
        for_each_record(reader, source_name, |lineno, fields| {
            let err = |msg: String| Error::parse(source_name, lineno, msg);
            if fields.len() != 2 {
                return Err(err(format!("expected 2 fields, found {}", fields.len())));
            }
            let surface = opts.text(fields[0].trim());
            let lemma = opts.text(fields[1].trim());
            if surface.is_empty() || lemma.is_empty() {
                return Err(err("empty surface or lemma".into()));
            }
            if surface.contains(char::is_whitespace) || lemma.contains(char::is_whitespace) {
                return Err(err("surface and lemma must be single tokens".into()));
            }
            match entries.get(&surface) {
                Some(prev) if *prev != lemma => {
                    return Err(err(format!(
                        "`{surface}` maps to `{lemma}` but line {} maps it to `{prev}`",
                        first_seen[&surface]
                    )))
                }
                Some(_) => {}
                None => {
                    first_seen.insert(surface.clone(), lineno);
                    entries.insert(surface, lemma);
                }
            }
            Ok(())
        })?;
        Self::validated(entries, source_name, &first_seen)
    }

    fn validated(
        entries: HashMap<String, String>,
        source_name: &str,
        lines: &HashMap<String, usize>,
    ) -> Result<Self> {
        let mut bad: Vec<(&String, &String)> = entries
            .iter()
            .filter(|(_, lemma)| entries.get(*lemma).is_some_and(|l| l != *lemma))
            .collect();
        bad.sort();
        if let Some((surface, lemma)) = bad.first() {
            return Err(Error::parse(
                source_name,
                lines.get(*surface).copied().unwrap_or(0),
                format!(
                    "lemma `{lemma}` of `{surface}` is not a fixed point (it maps to `{}`)",
                    entries[*lemma]
                ),
            ));
        }
        Ok(LemmaDictionary { entries })
    }

    /// Builds a dictionary from pairs, enforcing the same rules as the loader.
    pub fn from_pairs<I, S, L>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, L)>,
        S: Into<String>,
        L: Into<String>,
    {
        let mut entries: HashMap<String, String> = HashMap::new();
        for (s, l) in pairs {
            let (s, l) = (s.into(), l.into());
            if s.is_empty() || l.is_empty() {
                return Err(Error::InvalidArgument("empty surface or lemma".into()));
            }
            if let Some(prev) = entries.get(&s) {
                if *prev != l {
                    return Err(Error::InvalidArgument(format!(
                        "`{s}` maps to both `{prev}` and `{l}`"
                    )));
                }
            }
            entries.insert(s, l);
        }
        Self::validated(entries, "<pairs>", &HashMap::new())
    }

    pub fn lemmatize<'a>(&'a self, surface: &'a str) -> &'a str {
        self.entries
            .get(surface)
            .map(String::as_str)
            .unwrap_or(surface)
    }

    /// Lemmatizes every space-separated token of `phrase`.
    pub fn lemmatize_phrase(&self, phrase: &str) -> String {
        phrase
            .split(' ')
            .map(|t| self.lemmatize(t))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
