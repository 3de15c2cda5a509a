use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::corpus::{AssociationSet, LemmaDictionary};
use crate::error::{Error, Result};

/// How a stimulus → response pair is turned into co-occurrence events.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CountMode {
    /// One `(stimulus, response)` event; rows are stimuli, columns responses.
    Directional,
    /// `(stimulus, response)` and `(response, stimulus)` over one shared
    /// vocabulary.
    #[default]
    Symmetric,
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Directional => "directional",
            CountMode::Symmetric => "symmetric",
        })
    }
}

impl FromStr for CountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directional" => Ok(CountMode::Directional),
            "symmetric" => Ok(CountMode::Symmetric),
            other => Err(Error::InvalidArgument(format!(
                "unknown count mode `{other}`"
            ))),
        }
    }
}

/// Sparse word × context counts with sorted vocabularies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    mode: CountMode,
    rows: Vec<String>,
    cols: Vec<String>,
    /// `(row, col, count)` sorted by `(row, col)`, counts positive.
    cells: Vec<(usize, usize, u64)>,
}

impl CooccurrenceCounts {
    /// Builds counts from a dense table; zero entries are not stored.
    pub fn from_dense(
        mode: CountMode,
        rows: Vec<String>,
        cols: Vec<String>,
        counts: &[Vec<u64>],
    ) -> Result<Self> {
        if counts.len() != rows.len() || counts.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::InvalidArgument(format!(
                "count table shape does not match {}x{} vocabulary",
                rows.len(),
                cols.len()
            )));
        }
        if mode == CountMode::Symmetric {
            let symmetric = rows == cols
                && (0..rows.len()).all(|i| (0..i).all(|j| counts[i][j] == counts[j][i]));
            if !symmetric {
                return Err(Error::InvalidArgument(
                    "symmetric counts need identical vocabularies and a symmetric table".into(),
                ));
            }
        }
        let cells = counts
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(move |(j, &c)| (i, j, c))
            })
            .collect();
        Ok(CooccurrenceCounts {
            mode,
            rows,
            cols,
            cells,
        })
    }

    pub fn mode(&self) -> CountMode {
        self.mode
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn cells(&self) -> &[(usize, usize, u64)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn count(&self, word: &str, context: &str) -> u64 {
        let (Ok(i), Ok(j)) = (
            self.rows.binary_search_by(|w| w.as_str().cmp(word)),
            self.cols.binary_search_by(|c| c.as_str().cmp(context)),
        ) else {
            return 0;
        };
        self.cells
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(i, j)))
            .map_or(0, |k| self.cells[k].2)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.rows.len()];
        for &(i, _, c) in &self.cells {
            sums[i] += c;
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.cols.len()];
        for &(_, j, c) in &self.cells {
            sums[j] += c;
        }
        sums
    }
}

/// Counts stimulus → response events over lemmatized tokens, then drops
/// every token whose total occurrence count is below `threshold`.
///
/// A token's total is the number of times it appears in the association
/// set, as stimulus or as response. Multi-word responses are one token.
/// Pruning runs once; cells touching a pruned token are removed and the
/// vocabularies keep only tokens with a surviving cell.
pub fn build_cooccurrence(
    set: &AssociationSet,
    mode: CountMode,
    threshold: u64,
    dict: &LemmaDictionary,
) -> CooccurrenceCounts {
    let mut pairs: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut totals: HashMap<String, u64> = HashMap::new();
    for record in set {
        let stimulus = dict.lemmatize(&record.stimulus).to_owned();
        let response = dict.lemmatize_phrase(&record.response);
        *totals.entry(stimulus.clone()).or_default() += 1;
        *totals.entry(response.clone()).or_default() += 1;
        if mode == CountMode::Symmetric {
            *pairs
                .entry((response.clone(), stimulus.clone()))
                .or_default() += 1;
        }
        *pairs.entry((stimulus, response)).or_default() += 1;
    }

    let keep = |t: &str| totals.get(t).copied().unwrap_or(0) >= threshold;
    pairs.retain(|(w, c), _| keep(w) && keep(c));

    let rows: Vec<String> = pairs
        .keys()
        .map(|(w, _)| w.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let cols: Vec<String> = pairs
        .keys()
        .map(|(_, c)| c.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let row_index: HashMap<&str, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let col_index: HashMap<&str, usize> = cols
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    // BTreeMap order over (row word, col word) equals (row idx, col idx) order.
    let cells = pairs
        .iter()
        .map(|((w, c), &n)| (row_index[w.as_str()], col_index[c.as_str()], n))
        .collect();

    CooccurrenceCounts {
        mode,
        rows,
        cols,
        cells,
    }
}
