use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::failure::Failure;
use crate::Format;

/// One row of a tidy table: `scope, attribute, label, metric, value`.
#[derive(Serialize, Debug, Clone)]
pub struct TidyRow {
    pub scope: String,
    pub attribute: String,
    pub label: String,
    pub metric: String,
    pub value: String,
}

impl TidyRow {
    pub fn new(
        scope: &str,
        attribute: &str,
        label: &str,
        metric: &str,
        value: impl ToString,
    ) -> Self {
        TidyRow {
            scope: scope.to_owned(),
            attribute: attribute.to_owned(),
            label: label.to_owned(),
            metric: metric.to_owned(),
            value: value.to_string(),
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| {
        Failure::input(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

/// Writes `<stem>.json` or `<stem>.csv` into `dir` and returns the path.
pub fn write_report<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    json: &T,
    tidy: &[TidyRow],
) -> Result<PathBuf, Failure> {
    ensure_dir(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(json)?;
            text.push('\n');
            fs::write(&path, text)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_path(&path)?;
            for row in tidy {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(path)
}

/// File-name-safe form of a slice label.
pub fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
