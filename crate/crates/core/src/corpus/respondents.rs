use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{for_each_record, open, LoadOptions};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Male,
    Female,
    Unknown,
}

impl Gender {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
            Gender::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = Error;

    /// Accepts the file tokens `m`, `f`, `u` as well as the full names.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "m" | "male" => Ok(Gender::Male),
            "f" | "female" => Ok(Gender::Female),
            "u" | "unknown" => Ok(Gender::Unknown),
            other => Err(Error::InvalidArgument(format!("unknown gender `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Respondent {
    pub id: String,
    pub gender: Gender,
    pub specialization: String,
    pub age: Option<u32>,
    pub location: String,
}

#[derive(Clone, Debug, Default)]
pub struct RespondentTable {
    entries: HashMap<String, Respondent>,
}

impl RespondentTable {
    /// Loads `id \t gender \t specialization \t age \t location` lines.
    /// Trailing empty fields may be omitted.
    pub fn load(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        Self::from_reader(open(path)?, &path.display().to_string(), opts)
    }

    pub fn from_reader<R: BufRead>(
        reader: R,
        source_name: &str,
        opts: &LoadOptions,
    ) -> Result<Self> {
        let mut entries = HashMap::new();
        for_each_record(reader, source_name, |lineno, fields| {
            let err = |msg: String| Error::parse(source_name, lineno, msg);
            if !(2..=5).contains(&fields.len()) {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            }
            let field = |i: usize| fields.get(i).map(|f| f.trim()).unwrap_or("");
            let id = field(0);
            if id.is_empty() {
                return Err(err("empty respondent id".into()));
            }
            let gender = match field(1) {
                "m" => Gender::Male,
                "f" => Gender::Female,
                "u" => Gender::Unknown,
                other => return Err(err(format!("unknown gender token `{other}`"))),
            };
            let age = match field(3) {
                "" => None,
                a => Some(
                    a.parse::<u32>()
                        .map_err(|_| err(format!("age `{a}` is not a non-negative integer")))?,
                ),
            };
            let respondent = Respondent {
                id: id.to_owned(),
                gender,
                specialization: opts.text(field(2)),
                age,
                location: opts.text(field(4)),
            };
            if entries.insert(id.to_owned(), respondent).is_some() {
                return Err(err(format!("duplicate respondent id `{id}`")));
            }
            Ok(())
        })?;
        Ok(RespondentTable { entries })
    }

    pub fn get(&self, id: &str) -> Option<&Respondent> {
        self.entries.get(id)
    }

    /// Like [`RespondentTable::get`] but an absent id is an error.
    pub fn resolve(&self, id: &str) -> Result<&Respondent> {
        self.get(id)
            .ok_or_else(|| Error::UnknownRespondent(id.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Respondent> {
        self.entries.values()
    }
}

impl FromIterator<Respondent> for RespondentTable {
    fn from_iter<T: IntoIterator<Item = Respondent>>(iter: T) -> Self {
        RespondentTable {
            entries: iter.into_iter().map(|r| (r.id.clone(), r)).collect(),
        }
    }
}
