use std::path::Path;

use assocnorms::corpus::{
    AssociationSet, LemmaDictionary, LoadOptions, NgramTable, RespondentTable, ThesaurusIndex,
};
use assocnorms::demographics::{slice, Attribute, SliceSpec};

use crate::failure::Failure;
use crate::Common;

/// Everything a command may read, loaded once.
pub struct Inputs {
    pub set: AssociationSet,
    pub respondents: Option<RespondentTable>,
    pub ngrams: Option<NgramTable>,
    pub dict: LemmaDictionary,
    pub thesaurus: Option<ThesaurusIndex>,
}

fn require_exists(path: &Path) -> Result<(), Failure> {
    if path.exists() {
        Ok(())
    } else {
        Err(Failure::input(format!(
            "input file not found: {}",
            path.display()
        )))
    }
}

impl Inputs {
    /// Checks every referenced path, loads the inputs and applies `--filter`.
    pub fn load(common: &Common) -> Result<Self, Failure> {
        let paths = [
            Some(&common.assoc),
            common.resp.as_ref(),
            common.ngrams.as_ref(),
            common.lemmas.as_ref(),
            common.thesaurus.as_ref(),
        ];
        for p in paths.into_iter().flatten() {
            require_exists(p)?;
        }
        let spec: Option<SliceSpec> = common.filter.as_deref().map(str::parse).transpose()?;

        let opts = if common.no_normalize {
            LoadOptions::raw()
        } else {
            LoadOptions::default()
        };
        let respondents = common
            .resp
            .as_ref()
            .map(|p| RespondentTable::load(p, &opts))
            .transpose()?;
        let set = AssociationSet::load(&common.assoc, &opts, respondents.as_ref())?;
        let ngrams = common
            .ngrams
            .as_ref()
            .map(|p| NgramTable::load(p, &opts))
            .transpose()?;
        let dict = match &common.lemmas {
            Some(p) => LemmaDictionary::load(p, &opts)?,
            None => LemmaDictionary::identity(),
        };
        let thesaurus = common
            .thesaurus
            .as_ref()
            .map(|p| ThesaurusIndex::load(p, &opts))
            .transpose()?;

        let set = match spec {
            Some(spec) if !spec.is_universal() => {
                let table = respondents
                    .as_ref()
                    .ok_or_else(|| Failure::input("--filter needs --resp"))?;
                slice(&set, table, &spec)?
            }
            _ => set,
        };
        if set.is_empty() {
            return Err(Failure::degenerate("no associations left after filtering"));
        }
        Ok(Inputs {
            set,
            respondents,
            ngrams,
            dict,
            thesaurus,
        })
    }

    pub fn ngrams(&self) -> Result<&NgramTable, Failure> {
        self.ngrams
            .as_ref()
            .ok_or_else(|| Failure::input("--ngrams is required"))
    }

    pub fn respondents(&self, purpose: &str) -> Result<&RespondentTable, Failure> {
        self.respondents
            .as_ref()
            .ok_or_else(|| Failure::input(format!("--resp is required for {purpose}")))
    }
}

pub fn parse_attribute(s: &str) -> Result<Attribute, Failure> {
    Ok(s.parse()?)
}
