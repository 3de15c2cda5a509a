use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use assocnorms::corpus::{
    AssociationRecord, AssociationSet, LemmaDictionary, NgramTable, RelationType, RespondentTable,
};
use assocnorms::demographics::{
    normalize_over_gender, per_respondent_metric, permutation_test_detailed, respondent_means,
    Attribute,
};
use assocnorms::embedding::{
    build_personalized_models, build_space, nearest_neighbors, EmbeddingConfig, EmbeddingSpace,
};
use assocnorms::scoring::{match_frequency, relation_profile, syntagmatic_score};
use assocnorms::summary::summarize;
use assocnorms::{Error, RelationProfile, ScoreReport};
use serde::Serialize;

use crate::failure::Failure;
use crate::inputs::{parse_attribute, Inputs};
use crate::output::{ensure_dir, sanitize, write_report, TidyRow};
use crate::{EmbedArgs, NnArgs, ReportArgs, ScoreArgs, TestArgs};

const GENDER_HALF_SUM: &str = "gender_half_sum";
const RAW_MEAN: &str = "raw_mean";

#[derive(Serialize)]
struct ScoreOutput<'a> {
    filter: Option<&'a str>,
    global: ScoreReport,
    relations: Option<RelationProfile>,
    by: Option<&'static str>,
    slices: Vec<SliceRow>,
}

#[derive(Serialize)]
struct SliceRow {
    label: String,
    respondents: usize,
    report: ScoreReport,
    relations: Option<RelationProfile>,
    norm_kind: &'static str,
    norm_match_rate_pct: f64,
    norm_mean_log: f64,
}

fn match_rate_metric<'a>(
    ngrams: &'a NgramTable,
    dict: &'a LemmaDictionary,
) -> impl Fn(&AssociationRecord) -> f64 + 'a {
    move |r| {
        if match_frequency(r, ngrams, dict).is_matched() {
            100.0
        } else {
            0.0
        }
    }
}

fn log_metric<'a>(
    ngrams: &'a NgramTable,
    dict: &'a LemmaDictionary,
) -> impl Fn(&AssociationRecord) -> f64 + 'a {
    move |r| match_frequency(r, ngrams, dict).log_contribution
}

/// Records grouped by the respondent's `attribute` label; unlabeled respondents are dropped.
fn group_records(
    set: &AssociationSet,
    table: &RespondentTable,
    attribute: Attribute,
) -> Result<BTreeMap<String, AssociationSet>, Failure> {
    let mut groups: BTreeMap<String, Vec<AssociationRecord>> = BTreeMap::new();
    for r in set {
        if let Some(label) = attribute.label(table.resolve(&r.respondent_id)?) {
            groups.entry(label).or_default().push(r.clone());
        }
    }
    Ok(groups
        .into_iter()
        .map(|(k, v)| (k, AssociationSet::new(v)))
        .collect())
}

/// Gender half-sum of a per-respondent metric, or the plain mean over
/// respondents when one gender is absent from `set`.
fn normalized<F>(
    set: &AssociationSet,
    table: &RespondentTable,
    metric: F,
) -> Result<(&'static str, f64), Failure>
where
    F: Fn(&AssociationRecord) -> f64,
{
    match normalize_over_gender(set, table, &metric) {
        Ok(v) => Ok((GENDER_HALF_SUM, v)),
        Err(Error::MissingGroup(_)) => {
            let means: Vec<f64> = respondent_means(set, &metric).into_values().collect();
            Ok((RAW_MEAN, means.iter().sum::<f64>() / means.len() as f64))
        }
        Err(e) => Err(e.into()),
    }
}

fn report_rows(
    rows: &mut Vec<TidyRow>,
    scope: &str,
    attribute: &str,
    label: &str,
    r: &ScoreReport,
) {
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "total",
        r.total_responses,
    ));
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "matched",
        r.matched_count,
    ));
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "match_rate_pct",
        r.match_rate_percent,
    ));
    rows.push(TidyRow::new(scope, attribute, label, "s", r.score));
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "mean_log",
        r.mean_log_contribution,
    ));
}

fn relation_rows(
    rows: &mut Vec<TidyRow>,
    scope: &str,
    attribute: &str,
    label: &str,
    p: &RelationProfile,
) {
    for rel in RelationType::ALL {
        let name = rel.as_str();
        rows.push(TidyRow::new(scope, attribute, label, name, p.count(rel)));
        rows.push(TidyRow::new(
            scope,
            attribute,
            label,
            &format!("{name}_pct"),
            p.percent(rel),
        ));
    }
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "unclassified",
        p.unclassified.count,
    ));
    rows.push(TidyRow::new(
        scope,
        attribute,
        label,
        "unclassified_pct",
        p.unclassified.percent,
    ));
}

pub fn score(args: &ScoreArgs) -> Result<(), Failure> {
    let by = args.by.as_deref().map(parse_attribute).transpose()?;
    let inputs = Inputs::load(&args.common)?;
    let ngrams = inputs.ngrams()?;
    let dict = &inputs.dict;

    let global = syntagmatic_score(&inputs.set, ngrams, dict)?;
    let relations = inputs
        .thesaurus
        .as_ref()
        .map(|t| relation_profile(&inputs.set, t, dict))
        .transpose()?;

    let mut slices = Vec::new();
    if let Some(attribute) = by {
        let table = inputs.respondents("--by")?;
        for (label, subset) in group_records(&inputs.set, table, attribute)? {
            let ids: BTreeSet<&str> = subset.iter().map(|r| r.respondent_id.as_str()).collect();
            let (kind, rate) = normalized(&subset, table, match_rate_metric(ngrams, dict))?;
            let (_, mean_log) = normalized(&subset, table, log_metric(ngrams, dict))?;
            slices.push(SliceRow {
                respondents: ids.len(),
                report: syntagmatic_score(&subset, ngrams, dict)?,
                relations: inputs
                    .thesaurus
                    .as_ref()
                    .map(|t| relation_profile(&subset, t, dict))
                    .transpose()?,
                norm_kind: kind,
                norm_match_rate_pct: rate,
                norm_mean_log: mean_log,
                label,
            });
        }
    }

    let by_name = by.map(|a| a.as_str());
    let mut tidy = Vec::new();
    report_rows(&mut tidy, "global", "", "", &global);
    if let Some(p) = &relations {
        relation_rows(&mut tidy, "global", "", "", p);
    }
    for s in &slices {
        let attr = by_name.unwrap_or_default();
        tidy.push(TidyRow::new(
            "slice",
            attr,
            &s.label,
            "respondents",
            s.respondents,
        ));
        report_rows(&mut tidy, "slice", attr, &s.label, &s.report);
        if let Some(p) = &s.relations {
            relation_rows(&mut tidy, "slice", attr, &s.label, p);
        }
        tidy.push(TidyRow::new(
            "slice",
            attr,
            &s.label,
            "norm_kind",
            s.norm_kind,
        ));
        tidy.push(TidyRow::new(
            "slice",
            attr,
            &s.label,
            "norm_match_rate_pct",
            s.norm_match_rate_pct,
        ));
        tidy.push(TidyRow::new(
            "slice",
            attr,
            &s.label,
            "norm_mean_log",
            s.norm_mean_log,
        ));
    }

    println!(
        "matched {} of {} ({:.2}%), S = {:.6}",
        global.matched_count, global.total_responses, global.match_rate_percent, global.score
    );
    let out = ScoreOutput {
        filter: args.common.filter.as_deref(),
        global,
        relations,
        by: by_name,
        slices,
    };
    let path = write_report(&args.common.out, "score", args.common.format, &out, &tidy)?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct GroupSummary {
    label: String,
    count: usize,
    mean: f64,
}

#[derive(Serialize)]
struct TestOutput {
    attribute: &'static str,
    metric: &'static str,
    group_a: GroupSummary,
    group_b: GroupSummary,
    /// `mean(a) - mean(b)`.
    statistic: f64,
    p_value: f64,
    extreme: u64,
    iterations: u64,
    seed: u64,
}

pub fn test(args: &TestArgs) -> Result<(), Failure> {
    let attribute = parse_attribute(&args.by)?;
    if args.iters == 0 {
        return Err(Failure::input("--iters must be positive"));
    }
    let inputs = Inputs::load(&args.common)?;
    let ngrams = inputs.ngrams()?;
    let table = inputs.respondents("test")?;

    let groups = per_respondent_metric(
        &inputs.set,
        table,
        attribute,
        match_rate_metric(ngrams, &inputs.dict),
    )?;
    let mut ranked: Vec<_> = groups.into_values().collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    if ranked.len() < 2 {
        return Err(Failure::degenerate(format!(
            "attribute `{attribute}` has {} group(s); at least 2 are needed",
            ranked.len()
        )));
    }
    let (a, b) = (&ranked[0], &ranked[1]);
    let outcome = permutation_test_detailed(&a.values, &b.values, args.iters, args.common.seed)?;

    let summary = |g: &assocnorms::GroupStats| GroupSummary {
        label: g.label.clone(),
        count: g.count,
        mean: g.mean,
    };
    let out = TestOutput {
        attribute: attribute.as_str(),
        metric: "match_rate_pct",
        group_a: summary(a),
        group_b: summary(b),
        statistic: outcome.observed,
        p_value: outcome.p_value,
        extreme: outcome.extreme,
        iterations: outcome.iterations,
        seed: outcome.seed,
    };

    let attr = attribute.as_str();
    let mut tidy = Vec::new();
    for (scope, g) in [("group_a", &out.group_a), ("group_b", &out.group_b)] {
        tidy.push(TidyRow::new(scope, attr, &g.label, "count", g.count));
        tidy.push(TidyRow::new(
            scope,
            attr,
            &g.label,
            "mean_match_rate_pct",
            g.mean,
        ));
    }
    for (metric, value) in [
        ("statistic", out.statistic.to_string()),
        ("p_value", out.p_value.to_string()),
        ("extreme", out.extreme.to_string()),
        ("iterations", out.iterations.to_string()),
        ("seed", out.seed.to_string()),
    ] {
        tidy.push(TidyRow::new("test", attr, "", metric, value));
    }

    println!(
        "{attr}: {} (n={}, mean={:.4}) vs {} (n={}, mean={:.4})",
        a.label, a.count, a.mean, b.label, b.count, b.mean
    );
    println!(
        "statistic {:.6}, p = {} ({} iterations, seed {})",
        out.statistic, out.p_value, out.iterations, out.seed
    );
    let path = write_report(&args.common.out, "test", args.common.format, &out, &tidy)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn save_model(space: &EmbeddingSpace, dir: &Path, label: &str) -> Result<(), Failure> {
    let path = dir.join(format!("model_{}.txt", sanitize(label)));
    space.save(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn embed(args: &EmbedArgs) -> Result<(), Failure> {
    let config = EmbeddingConfig {
        dim: args.dim,
        alpha: args.alpha,
        shift: args.shift,
        eig_weight: args.eig_weight,
        threshold: args.threshold,
        seed: args.common.seed,
        mode: args.mode.parse()?,
        ..EmbeddingConfig::default()
    };
    config.validate()?;
    let by = args.by.as_deref().map(parse_attribute).transpose()?;
    let inputs = Inputs::load(&args.common)?;
    let dir = &args.common.out;

    let Some(attribute) = by else {
        let space = build_space(&inputs.set, &inputs.dict, &config)?;
        ensure_dir(dir)?;
        return save_model(&space, dir, "all");
    };
    let table = inputs.respondents("--by")?;
    let models = build_personalized_models(&inputs.set, table, attribute, &inputs.dict, &config)?;
    for w in &models.warnings {
        eprintln!("warning: {w}");
    }
    for s in &models.skipped {
        eprintln!("warning: skipped slice `{}`: {}", s.label, s.reason);
    }

    let mut files = BTreeMap::new();
    for label in models.slices.keys() {
        let name = sanitize(label);
        if name == "all" || files.insert(name.clone(), label).is_some() {
            return Err(Failure::input(format!(
                "slice label `{label}` collides with another model file name"
            )));
        }
    }
    ensure_dir(dir)?;
    save_model(&models.baseline, dir, "all")?;
    for (label, space) in &models.slices {
        save_model(space, dir, label)?;
    }
    Ok(())
}

/// Column title for a model file: its stem without the `model_` prefix.
fn model_title(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    stem.strip_prefix("model_")
        .map(str::to_owned)
        .unwrap_or(stem)
}

pub fn nn(args: &NnArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::input("-n must be positive"));
    }
    let mut columns = Vec::new();
    for path in &args.models {
        if !path.exists() {
            return Err(Failure::input(format!(
                "model file not found: {}",
                path.display()
            )));
        }
        let space = EmbeddingSpace::load(path)?;
        let cells: Option<Vec<String>> = if space.contains(&args.query) {
            let list = nearest_neighbors(&space, &args.query, args.n)?;
            Some(
                list.neighbors
                    .iter()
                    .map(|(w, s)| format!("{w} {s:.4}"))
                    .collect(),
            )
        } else {
            None
        };
        columns.push((model_title(path), cells));
    }
    if columns.iter().all(|(_, c)| c.is_none()) {
        return Err(Failure::degenerate(format!(
            "`{}` is not in the vocabulary of any model",
            args.query
        )));
    }

    let rows = columns
        .iter()
        .filter_map(|(_, c)| c.as_ref().map(Vec::len))
        .max()
        .unwrap_or(0)
        .max(1);
    let table: Vec<Vec<String>> = columns
        .iter()
        .map(|(title, cells)| {
            let mut col = vec![title.clone()];
            for i in 0..rows {
                col.push(match cells {
                    Some(c) => c.get(i).cloned().unwrap_or_default(),
                    None => "—".to_owned(),
                });
            }
            col
        })
        .collect();
    let widths: Vec<usize> = table
        .iter()
        .map(|col| col.iter().map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();

    println!("query: {}", args.query);
    for r in 0..=rows {
        let line: Vec<String> = table
            .iter()
            .zip(&widths)
            .map(|(col, &w)| format!("{:<w$}", col[r]))
            .collect();
        println!("{}", line.join("  ").trim_end());
    }
    Ok(())
}

pub fn report(args: &ReportArgs) -> Result<(), Failure> {
    let inputs = Inputs::load(&args.common)?;
    let summary = summarize(
        &inputs.set,
        &inputs.dict,
        inputs.respondents.as_ref(),
        args.top,
    )?;

    let mut tidy = Vec::new();
    for (metric, value) in [
        ("questionnaires", summary.questionnaires),
        ("responses", summary.responses),
        ("distinct_stimuli", summary.distinct_stimuli),
        ("distinct_stimulus_lemmas", summary.distinct_stimulus_lemmas),
        ("distinct_responses", summary.distinct_responses),
        ("distinct_response_lemmas", summary.distinct_response_lemmas),
    ] {
        tidy.push(TidyRow::new("dataset", "", "", metric, value));
    }
    for (word, count) in &summary.top_responses {
        tidy.push(TidyRow::new("top_response", "", word, "count", count));
    }
    for (attribute, counts) in &summary.respondents_by_attribute {
        for (label, n) in counts {
            tidy.push(TidyRow::new("respondents", attribute, label, "count", n));
        }
    }

    println!(
        "{} questionnaires, {} responses, {} distinct stimuli, {} distinct responses",
        summary.questionnaires,
        summary.responses,
        summary.distinct_stimuli,
        summary.distinct_responses
    );
    let path = write_report(
        &args.common.out,
        "summary",
        args.common.format,
        &summary,
        &tidy,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}
