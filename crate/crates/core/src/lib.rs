//! Word-association norm analysis.
//!
//! * [`corpus`]: TSV loaders for associations, respondents, ngram
//!   frequencies, lemma dictionaries and thesaurus relations.
//! * [`scoring`]: syntagmatic (corpus ngram) scoring over eight candidate
//!   ngrams per association, and paradigmatic (thesaurus relation) profiles.
//! * [`demographics`]: respondent slicing, per-respondent aggregates,
//!   gender-normalized means and a seeded permutation test.
//! * [`embedding`]: PPMI-SVD association spaces per demographic slice with
//!   cosine nearest-neighbour queries.
//! * [`summary`]: dataset overview counts.

pub mod corpus;
pub mod demographics;
pub mod embedding;
mod error;
pub mod numeric;
pub mod scoring;
pub mod summary;

pub use corpus::{
    AssociationRecord, AssociationSet, Gender, LemmaDictionary, LoadOptions, NgramTable,
    RelationType, Respondent, RespondentTable, ThesaurusIndex,
};
pub use demographics::{Attribute, GroupStats, SliceSpec};
pub use embedding::{CountMode, EmbeddingConfig, EmbeddingSpace, NeighborList, PpmiMatrix};
pub use error::{Error, Result};
pub use scoring::{MatchResult, RelationProfile, ScoreReport};
