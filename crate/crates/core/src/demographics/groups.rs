use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Attribute;
use crate::corpus::{AssociationRecord, AssociationSet, RespondentTable};
use crate::error::{Error, Result};
use crate::numeric::mean;

/// Per-respondent values of one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub label: String,
    /// One value per respondent, ordered by respondent id.
    pub values: Vec<f64>,
    pub mean: f64,
    pub count: usize,
}

impl GroupStats {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        let mean = mean(&values).ok_or(Error::Empty("group values"))?;
        Ok(GroupStats {
            count: values.len(),
            label,
            values,
            mean,
        })
    }
}

/// Mean of `metric` over each respondent's records, keyed by respondent id.
pub fn respondent_means<F>(set: &AssociationSet, metric: F) -> BTreeMap<String, f64>
where
    F: Fn(&AssociationRecord) -> f64,
{
    let mut per: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for record in set {
        per.entry(&record.respondent_id)
            .or_default()
            .push(metric(record));
    }
    per.into_iter()
        .map(|(id, v)| (id.to_owned(), mean(&v).unwrap_or(0.0)))
        .collect()
}

/// Averages `metric` within each respondent, then groups respondents by
/// `attribute`. Respondents with an unknown or empty value are left out.
pub fn per_respondent_metric<F>(
    set: &AssociationSet,
    table: &RespondentTable,
    attribute: Attribute,
    metric: F,
) -> Result<BTreeMap<String, GroupStats>>
where
    F: Fn(&AssociationRecord) -> f64,
{
    if set.is_empty() {
        return Err(Error::Empty("association set"));
    }
    let mut grouped: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (id, value) in respondent_means(set, metric) {
        let respondent = table.resolve(&id)?;
        if let Some(label) = attribute.label(respondent) {
            grouped.entry(label).or_default().push(value);
        }
    }
    grouped
        .into_iter()
        .map(|(label, values)| Ok((label.clone(), GroupStats::new(label, values)?)))
        .collect()
}

/// Half-sum of the male and female group means.
pub fn gender_normalized(male_mean: f64, female_mean: f64) -> f64 {
    (male_mean + female_mean) / 2.0
}

/// Gender-normalized mean of a per-respondent metric over `set`.
///
/// Fails with [`Error::MissingGroup`] when either gender has no respondents,
/// in which case the normalization is undefined.
pub fn normalize_over_gender<F>(
    set: &AssociationSet,
    table: &RespondentTable,
    metric: F,
) -> Result<f64>
where
    F: Fn(&AssociationRecord) -> f64,
{
    let groups = per_respondent_metric(set, table, Attribute::Gender, metric)?;
    let mean_of = |label: &str| {
        groups
            .get(label)
            .map(|g| g.mean)
            .ok_or_else(|| Error::MissingGroup(label.to_owned()))
    };
    Ok(gender_normalized(mean_of("male")?, mean_of("female")?))
}
