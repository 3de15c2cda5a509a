//! Truncated SVD of PPMI matrices.
//!
//! Small matrices go through an exact dense SVD. Larger ones use the
//! randomized range finder of Halko, Martinsson & Tropp with Gaussian test
//! vectors drawn from a seeded ChaCha stream. Both paths fix singular vector
//! signs so that repeated runs agree exactly.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::PpmiMatrix;

/// Which SVD algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SvdMethod {
    /// Exact when the smaller matrix dimension is at most `exact_max_dim`,
    /// randomized with the default oversampling and power iterations above.
    Auto {
        exact_max_dim: usize,
    },
    Exact,
    Randomized {
        oversample: usize,
        power_iters: usize,
    },
}

impl Default for SvdMethod {
    fn default() -> Self {
        SvdMethod::Auto {
            exact_max_dim: 2000,
        }
    }
}

pub const DEFAULT_OVERSAMPLE: usize = 10;
pub const DEFAULT_POWER_ITERS: usize = 2;

/// Rank-`d` factors `M ≈ U · diag(s) · Vᵀ`, singular values descending.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSvd {
    /// `rows × d`
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    /// `cols × d`
    pub v: DMatrix<f64>,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&self.singular_values) * self.v.transpose()
    }

    /// Makes the largest-magnitude entry of every left singular vector
    /// positive (first such entry on ties), flipping `v` to match.
    fn fix_signs(&mut self) {
        for k in 0..self.rank() {
            let col = self.u.column(k);
            let mut best = 0;
            for i in 1..col.len() {
                if col[i].abs() > col[best].abs() {
                    best = i;
                }
            }
            if !col.is_empty() && col[best] < 0.0 {
                self.u.column_mut(k).neg_mut();
                self.v.column_mut(k).neg_mut();
            }
        }
    }
}

/// Truncated SVD of `m` with `d` components. Caller guarantees
/// `1 <= d <= min(rows, cols)`.
pub fn truncated_svd(m: &PpmiMatrix, d: usize, method: SvdMethod, seed: u64) -> TruncatedSvd {
    let (rows, cols) = m.shape();
    let mut svd = match method {
        SvdMethod::Exact => exact(&m.to_dense(), d),
        SvdMethod::Auto { exact_max_dim } if rows.min(cols) <= exact_max_dim => {
            exact(&m.to_dense(), d)
        }
        SvdMethod::Auto { .. } => randomized(m, d, DEFAULT_OVERSAMPLE, DEFAULT_POWER_ITERS, seed),
        SvdMethod::Randomized {
            oversample,
            power_iters,
        } => randomized(m, d, oversample, power_iters, seed),
    };
    svd.fix_signs();
    svd
}

/// Full SVD truncated to the `d` largest singular values.
fn exact(a: &DMatrix<f64>, d: usize) -> TruncatedSvd {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let s = svd.singular_values;
    truncate_sorted(&u, &s, &v_t.transpose(), d)
}

fn truncate_sorted(u: &DMatrix<f64>, s: &DVector<f64>, v: &DMatrix<f64>, d: usize) -> TruncatedSvd {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    order.truncate(d);
    TruncatedSvd {
        u: u.select_columns(&order),
        singular_values: DVector::from_iterator(d, order.iter().map(|&k| s[k])),
        v: v.select_columns(&order),
    }
}

fn orthonormal_basis(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

fn randomized(
    m: &PpmiMatrix,
    d: usize,
    oversample: usize,
    power_iters: usize,
    seed: u64,
) -> TruncatedSvd {
    let (rows, cols) = m.shape();
    let width = (d + oversample).min(rows.min(cols));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = DMatrix::zeros(cols, width);
    for k in 0..width {
        for j in 0..cols {
            omega[(j, k)] = StandardNormal.sample(&mut rng);
        }
    }

    let mut q = orthonormal_basis(m.mul_dense(&omega));
    for _ in 0..power_iters {
        let z = orthonormal_basis(m.t_mul_dense(&q));
        q = orthonormal_basis(m.mul_dense(&z));
    }
    // B = Qᵀ M, computed as (Mᵀ Q)ᵀ.
    let b = m.t_mul_dense(&q).transpose();
    let small = b.svd(true, true);
    let u_small = small.u.expect("u requested");
    let v = small.v_t.expect("v_t requested").transpose();
    let u = &q * u_small;
    truncate_sorted(&u, &small.singular_values, &v, d)
}
