//! Personalized association spaces.
//!
//! Pair frequencies from an association set are turned into a word × context
//! count matrix, reweighted with shifted PPMI (context distribution
//! smoothing `alpha`, shift `k`), and factorized with a truncated SVD. Word
//! vectors are `U_d · Σ_d^p`. One space is built per demographic slice plus
//! a baseline on the full data.

use std::collections::{BTreeMap, BTreeSet};

mod cooccurrence;
mod ppmi;
mod space;
pub mod svd;

pub use cooccurrence::{build_cooccurrence, CooccurrenceCounts, CountMode};
pub use ppmi::{ppmi, PpmiMatrix};
pub use space::{
    cosine, factorize, factorize_with, nearest_neighbors, EmbeddingSpace, NeighborList,
};
pub use svd::{truncated_svd, SvdMethod, TruncatedSvd};

use crate::corpus::{AssociationSet, LemmaDictionary, RespondentTable};
use crate::demographics::Attribute;
use crate::error::{Error, Result};

/// Model hyper-parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingConfig {
    pub dim: usize,
    /// Context distribution smoothing exponent.
    pub alpha: f64,
    /// PMI shift `k`; `ln k` is subtracted before clipping.
    pub shift: f64,
    /// Singular value exponent `p`.
    pub eig_weight: f64,
    /// Minimum token occurrence count.
    pub threshold: u64,
    pub seed: u64,
    pub mode: CountMode,
    pub svd: SvdMethod,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dim: 100,
            alpha: 0.75,
            shift: 1.0,
            eig_weight: 0.5,
            threshold: 5,
            seed: 42,
            mode: CountMode::Symmetric,
            svd: SvdMethod::default(),
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.dim == 0 {
            return bad("dimension must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha {} not in (0, 1]", self.alpha));
        }
        if !(self.shift >= 1.0 && self.shift.is_finite()) {
            return bad(format!("shift {} must be >= 1", self.shift));
        }
        if !(0.0..=1.0).contains(&self.eig_weight) {
            return bad(format!(
                "eigenvalue weight {} not in [0, 1]",
                self.eig_weight
            ));
        }
        if self.threshold == 0 {
            return bad("threshold must be positive".into());
        }
        Ok(())
    }
}

/// Counts, PPMI and factorization in one step.
pub fn build_space(
    set: &AssociationSet,
    dict: &LemmaDictionary,
    config: &EmbeddingConfig,
) -> Result<EmbeddingSpace> {
    config.validate()?;
    let counts = build_cooccurrence(set, config.mode, config.threshold, dict);
    if counts.is_empty() {
        return Err(Error::Empty("co-occurrence counts after threshold pruning"));
    }
    let matrix = ppmi(&counts, config.alpha, config.shift)?;
    factorize_with(
        &matrix,
        config.dim,
        config.eig_weight,
        config.seed,
        config.svd,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedSlice {
    pub label: String,
    pub reason: String,
}

/// A baseline space on the full data plus one space per attribute value.
#[derive(Clone, Debug)]
pub struct PersonalizedModels {
    pub attribute: Attribute,
    pub baseline: EmbeddingSpace,
    pub slices: BTreeMap<String, EmbeddingSpace>,
    /// Slices whose data was too small after pruning.
    pub skipped: Vec<SkippedSlice>,
    pub warnings: Vec<String>,
}

/// Builds the baseline space and one space per value of `attribute`.
///
/// A slice is skipped (and reported) when threshold pruning leaves nothing
/// to factorize or fewer words than `config.dim`. Respondents without a
/// value for `attribute` only contribute to the baseline.
pub fn build_personalized_models(
    set: &AssociationSet,
    respondents: &RespondentTable,
    attribute: Attribute,
    dict: &LemmaDictionary,
    config: &EmbeddingConfig,
) -> Result<PersonalizedModels> {
    if set.is_empty() {
        return Err(Error::Empty("association set"));
    }
    config.validate()?;

    let mut by_label: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for record in set {
        let respondent = respondents.resolve(&record.respondent_id)?;
        if let Some(label) = attribute.label(respondent) {
            by_label.entry(label).or_default().push(record.clone());
        }
    }

    let baseline = build_space(set, dict, config)?;
    let mut warnings = Vec::new();
    let labels: BTreeSet<&String> = by_label.keys().collect();
    if labels.len() < 2 {
        warnings.push(format!(
            "attribute `{attribute}` has {} value(s); building {} slice model(s) and the baseline",
            labels.len(),
            labels.len()
        ));
    }

    let mut slices = BTreeMap::new();
    let mut skipped = Vec::new();
    for (label, records) in by_label {
        match build_space(&AssociationSet::new(records), dict, config) {
            Ok(space) => {
                slices.insert(label, space);
            }
            Err(e @ (Error::Empty(_) | Error::Dimension { .. })) => skipped.push(SkippedSlice {
                label,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }

    Ok(PersonalizedModels {
        attribute,
        baseline,
        slices,
        skipped,
        warnings,
    })
}
