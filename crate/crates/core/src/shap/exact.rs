use alloc::vec;
use alloc::vec::Vec;

use super::{check_inputs, ShapRow};
use crate::error::{Error, Result};
use crate::gbt::Ensemble;

/// Enumeration touches `2^m` coalitions per background row.
pub const MAX_EXACT_FEATURES: usize = 15;

/// Shapley values by enumerating all coalitions.
///
/// `background` is row-major with `model.n_features()` columns. Coalition
/// values are computed in mask order and marginal contributions summed in
/// ascending mask order for each feature.
pub fn shap_exact(model: &Ensemble, x: &[f64], background: &[f64]) -> Result<ShapRow> {
    let m = model.n_features();
    if m > MAX_EXACT_FEATURES {
        return Err(Error::EnumerationGuard { features: m, max: MAX_EXACT_FEATURES });
    }
    let n_bg = check_inputs(model, x, background)?;
    if m == 0 {
        return Ok(ShapRow { base: model.predict_unchecked(&[]), phi: Vec::new() });
    }

    let masks = 1usize << m;
    let mut value = vec![0.0f64; masks];
    let mut z = vec![0.0f64; m];
    for (mask, v) in value.iter_mut().enumerate() {
        let mut acc = 0.0;
        for b in background.chunks_exact(m) {
            for j in 0..m {
                z[j] = if mask >> j & 1 == 1 { x[j] } else { b[j] };
            }
            acc += model.predict_unchecked(&z);
        }
        *v = acc / n_bg as f64;
    }

    let weight = coalition_weights(m);
    let phi = (0..m)
        .map(|j| {
            let bit = 1usize << j;
            (0..masks)
                .filter(|mask| mask & bit == 0)
                .map(|mask| weight[mask.count_ones() as usize] * (value[mask | bit] - value[mask]))
                .sum()
        })
        .collect();
    Ok(ShapRow { base: value[0], phi })
}

/// `|S|! (m - |S| - 1)! / m!` for `|S| = 0..m`.
fn coalition_weights(m: usize) -> Vec<f64> {
    let fact: Vec<f64> = (0..=m)
        .scan(1.0f64, |acc, k| {
            if k > 0 {
                *acc *= k as f64;
            }
            Some(*acc)
        })
        .collect();
    (0..m).map(|s| fact[s] * fact[m - s - 1] / fact[m]).collect()
}
