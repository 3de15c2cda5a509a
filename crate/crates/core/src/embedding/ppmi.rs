use nalgebra::DMatrix;

use super::CooccurrenceCounts;
use crate::error::{Error, Result};

/// PMI values at or below this are treated as zero and not stored.
const MIN_STORED: f64 = 1e-12;

/// Sparse positive PMI matrix in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct PpmiMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    alpha: f64,
    shift: f64,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Shifted positive PMI with context distribution smoothing:
///
/// `max(0, ln(#(w,c) · Σ_c' #(c')^α / (#(w) · #(c)^α)) − ln k)`
///
/// where `#(w)` and `#(c)` are row and column totals of `counts`.
pub fn ppmi(counts: &CooccurrenceCounts, alpha: f64, shift: f64) -> Result<PpmiMatrix> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothing exponent {alpha} not in (0, 1]"
        )));
    }
    if !(shift >= 1.0 && shift.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "shift {shift} must be >= 1"
        )));
    }
    if counts.is_empty() {
        return Err(Error::Empty("co-occurrence counts"));
    }

    let row_sums: Vec<f64> = counts.row_sums().into_iter().map(|s| s as f64).collect();
    let smoothed: Vec<f64> = counts
        .col_sums()
        .into_iter()
        .map(|s| (s as f64).powf(alpha))
        .collect();
    let smoothed_total: f64 = smoothed.iter().sum();
    let log_shift = shift.ln();

    let n_rows = counts.rows().len();
    let mut row_ptr = Vec::with_capacity(n_rows + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    let mut cells = counts.cells().iter().peekable();
    row_ptr.push(0);
    for (i, &row_sum) in row_sums.iter().enumerate() {
        while let Some(&(_, j, n)) = cells.next_if(|&&(r, _, _)| r == i) {
            let pmi = ((n as f64 * smoothed_total) / (row_sum * smoothed[j])).ln() - log_shift;
            if pmi > MIN_STORED {
                col_idx.push(j);
                values.push(pmi);
            }
        }
        row_ptr.push(values.len());
    }

    Ok(PpmiMatrix {
        rows: counts.rows().to_vec(),
        cols: counts.cols().to_vec(),
        alpha,
        shift,
        row_ptr,
        col_idx,
        values,
    })
}

impl PpmiMatrix {
    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Stored entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries as `(row, column, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows.len()).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// Value at `(word, context)`, 0 when absent.
    pub fn get(&self, word: &str, context: &str) -> f64 {
        let (Ok(i), Ok(j)) = (
            self.rows.binary_search_by(|w| w.as_str().cmp(word)),
            self.cols.binary_search_by(|c| c.as_str().cmp(context)),
        ) else {
            return 0.0;
        };
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows.len(), self.cols.len());
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// `self · x`.
    pub(crate) fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.cols.len());
        let mut out = DMatrix::zeros(self.rows.len(), x.ncols());
        for k in 0..x.ncols() {
            for i in 0..self.rows.len() {
                out[(i, k)] = self.row(i).map(|(j, v)| v * x[(j, k)]).sum();
            }
        }
        out
    }

    /// `selfᵀ · y`.
    pub(crate) fn t_mul_dense(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(y.nrows(), self.rows.len());
        let mut out = DMatrix::zeros(self.cols.len(), y.ncols());
        for k in 0..y.ncols() {
            for (i, j, v) in self.entries() {
                out[(j, k)] += v * y[(i, k)];
            }
        }
        out
    }
}
