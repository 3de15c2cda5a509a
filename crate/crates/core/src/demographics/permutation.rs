use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermutationOutcome {
    /// `mean(a) - mean(b)` on the original labelling.
    pub observed: f64,
    pub p_value: f64,
    pub iterations: u64,
    /// Permutations whose absolute mean difference reached the observed one.
    pub extreme: u64,
    pub seed: u64,
}

/// Two-sided permutation test on the difference of means; returns the
/// p-value `(1 + extreme) / (1 + iterations)`.
pub fn permutation_test(
    group_a: &[f64],
    group_b: &[f64],
    iterations: u64,
    seed: u64,
) -> Result<f64> {
    permutation_test_detailed(group_a, group_b, iterations, seed).map(|o| o.p_value)
}

/// Like [`permutation_test`] but also reports the statistic and counts.
///
/// Iteration `i` draws its relabelling from a ChaCha stream keyed by
/// `(seed, i)`, so the result does not depend on thread scheduling.
pub fn permutation_test_detailed(
    group_a: &[f64],
    group_b: &[f64],
    iterations: u64,
    seed: u64,
) -> Result<PermutationOutcome> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::Empty("permutation test group"));
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    if group_a.iter().chain(group_b).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("group values must be finite".into()));
    }

    let n_a = group_a.len();
    let n_b = group_b.len();
    // The relabelling draws from the sorted pool and always picks the smaller
    // group, so exchanging the two groups leaves the p-value unchanged.
    let mut pooled: Vec<f64> = group_a.iter().chain(group_b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let picked = n_a.min(n_b);
    let rest = pooled.len() - picked;
    let total = pairwise_sum(&pooled);
    let observed = pairwise_sum(group_a) / n_a as f64 - pairwise_sum(group_b) / n_b as f64;

    // Relabellings that reproduce the observed split can differ from it by
    // rounding only; they must still count as extreme.
    let scale = pooled.iter().fold(0f64, |m, x| m.max(x.abs()));
    let threshold = observed.abs() - 1e-10 * scale.max(observed.abs());

    let extreme: u64 = (0..iterations)
        .into_par_iter()
        .map_init(
            || pooled.clone(),
            |buf, i| {
                buf.copy_from_slice(&pooled);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                // Partial Fisher-Yates over the first `picked` slots.
                for j in 0..picked {
                    let k = rng.random_range(j..buf.len());
                    buf.swap(j, k);
                }
                let sum = pairwise_sum(&buf[..picked]);
                let diff = sum / picked as f64 - (total - sum) / rest as f64;
                u64::from(diff.abs() >= threshold)
            },
        )
        .sum();

    Ok(PermutationOutcome {
        observed,
        p_value: (1 + extreme) as f64 / (1 + iterations) as f64,
        iterations,
        extreme,
        seed,
    })
}
