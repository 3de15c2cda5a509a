use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{fold, AssociationSet, Gender, Respondent, RespondentTable};
use crate::error::{Error, Result};

/// Respondent attribute used to group or slice a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attribute {
    Gender,
    Specialization,
    Location,
}

impl Attribute {
    pub fn as_str(&self) -> &'static str {
        match self {
            Attribute::Gender => "gender",
            Attribute::Specialization => "specialization",
            Attribute::Location => "location",
        }
    }

    /// Group label of `r`, or `None` when the value is unknown or empty.
    /// Respondents without a label are left out of per-attribute groupings.
    pub fn label(&self, r: &Respondent) -> Option<String> {
        match self {
            Attribute::Gender => match r.gender {
                Gender::Unknown => None,
                g => Some(g.as_str().to_owned()),
            },
            Attribute::Specialization => non_empty(&r.specialization),
            Attribute::Location => non_empty(&r.location),
        }
    }

    /// The slice selecting respondents whose label equals `label`.
    pub fn slice_for(&self, label: &str) -> Result<SliceSpec> {
        let mut spec = SliceSpec::universal();
        match self {
            Attribute::Gender => spec.genders = Some(BTreeSet::from([label.parse()?])),
            Attribute::Specialization => spec.specializations = Some(BTreeSet::from([fold(label)])),
            Attribute::Location => spec.locations = Some(BTreeSet::from([fold(label)])),
        }
        Ok(spec)
    }
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_owned())
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gender" => Ok(Attribute::Gender),
            "specialization" | "speciality" | "occupation" => Ok(Attribute::Specialization),
            "location" => Ok(Attribute::Location),
            other => Err(Error::InvalidArgument(format!(
                "unknown attribute `{other}`"
            ))),
        }
    }
}

/// Conjunction of attribute predicates. `None` means "no constraint".
///
/// Written as a filter string: `gender=f,specialization=chemistry|physics,age=18-26`.
/// Alternatives within one key are separated by `|`; a repeated key narrows
/// the constraint further.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SliceSpec {
    pub genders: Option<BTreeSet<Gender>>,
    /// Case-folded.
    pub specializations: Option<BTreeSet<String>>,
    /// Case-folded.
    pub locations: Option<BTreeSet<String>>,
    /// Inclusive age bounds. Respondents without an age never match.
    pub age: Option<(u32, u32)>,
}

impl SliceSpec {
    pub fn universal() -> Self {
        Self::default()
    }

    pub fn is_universal(&self) -> bool {
        *self == Self::default()
    }

    pub fn matches(&self, r: &Respondent) -> bool {
        self.genders.as_ref().is_none_or(|g| g.contains(&r.gender))
            && self
                .specializations
                .as_ref()
                .is_none_or(|s| s.contains(&fold(&r.specialization)))
            && self
                .locations
                .as_ref()
                .is_none_or(|s| s.contains(&fold(&r.location)))
            && self
                .age
                .is_none_or(|(lo, hi)| r.age.is_some_and(|a| lo <= a && a <= hi))
    }

    /// The slice matching respondents that satisfy both `self` and `other`.
    pub fn and(&self, other: &SliceSpec) -> SliceSpec {
        fn meet<T: Ord + Clone>(
            a: &Option<BTreeSet<T>>,
            b: &Option<BTreeSet<T>>,
        ) -> Option<BTreeSet<T>> {
            match (a, b) {
                (None, x) | (x, None) => x.clone(),
                (Some(a), Some(b)) => Some(a.intersection(b).cloned().collect()),
            }
        }
        SliceSpec {
            genders: meet(&self.genders, &other.genders),
            specializations: meet(&self.specializations, &other.specializations),
            locations: meet(&self.locations, &other.locations),
            age: match (self.age, other.age) {
                (None, x) | (x, None) => x,
                (Some((a0, a1)), Some((b0, b1))) => Some((a0.max(b0), a1.min(b1))),
            },
        }
    }
}

impl FromStr for SliceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SliceSpec::universal();
        for clause in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, value) = clause.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("filter clause `{clause}` lacks `=`"))
            })?;
            let values = value.split('|').map(str::trim);
            let mut part = SliceSpec::universal();
            match key.trim() {
                "gender" => {
                    part.genders = Some(values.map(str::parse).collect::<Result<_>>()?);
                }
                "specialization" | "speciality" | "occupation" => {
                    part.specializations = Some(values.map(fold).collect());
                }
                "location" => part.locations = Some(values.map(fold).collect()),
                "age" => part.age = Some(parse_age(value.trim())?),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown filter key `{other}`"
                    )))
                }
            }
            spec = spec.and(&part);
        }
        Ok(spec)
    }
}

fn parse_age(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidArgument(format!("age range `{s}` must be `N` or `MIN-MAX`"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    match s.split_once('-') {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        }
        None => num(s).map(|a| (a, a)),
    }
}

/// Records whose respondent satisfies `spec`, in input order.
pub fn slice(
    set: &AssociationSet,
    table: &RespondentTable,
    spec: &SliceSpec,
) -> Result<AssociationSet> {
    let mut out = Vec::new();
    for record in set {
        let respondent = table.resolve(&record.respondent_id)?;
        if spec.matches(respondent) {
            out.push(record.clone());
        }
    }
    Ok(AssociationSet::new(out))
}
