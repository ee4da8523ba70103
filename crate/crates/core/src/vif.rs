//! Variance inflation factors and stepwise multicollinearity pruning.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};

/// Default exclusion threshold.
pub const DEFAULT_VIF_THRESHOLD: f64 = 10.0;

/// Outcome of [`vif_filter`].
#[derive(Debug, Clone, PartialEq)]
pub struct VifReport {
    /// Removed predictors with the VIF that triggered their removal, in removal order.
    pub removed: Vec<(String, f64)>,
    /// VIF of every surviving predictor measured against the other survivors.
    pub retained: Vec<(String, f64)>,
}

/// Residual sum of squares of `y` after projecting out the span of `basis`
/// (orthonormal, centred columns). Two passes of modified Gram-Schmidt.
fn residual(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Vec<f64> {
    for _ in 0..2 {
        for q in basis {
            let c = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn centred(col: &[f64]) -> Vec<f64> {
    let mu = crate::stats::mean(col);
    col.iter().map(|v| v - mu).collect()
}

/// `1 / (1 - R²)` for a centred response against centred regressors, i.e.
/// `SS_tot / SS_res` of least squares with intercept.
fn vif_of(target: &[f64], regressors: &[&[f64]]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(regressors.len());
    for r in regressors {
        let norm0 = libm::sqrt(dot(r, r));
        let v = residual(r.to_vec(), &basis);
        let norm = libm::sqrt(dot(&v, &v));
        // columns already in the span carry no new direction
        if norm > 1e-10 * norm0 {
            basis.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let ss_tot = dot(target, target);
    let res = residual(target.to_vec(), &basis);
    let ss_res = dot(&res, &res);
    if ss_res <= ss_tot * f64::EPSILON * f64::EPSILON {
        f64::INFINITY
    } else {
        ss_tot / ss_res
    }
}

/// VIF of each predictor regressed on all others plus an intercept.
pub fn vif_values(data: &TabularDataset) -> Result<Vec<f64>> {
    let m = data.n_features();
    let n = data.n_rows();
    if m < 2 {
        return Err(Error::arg("VIF needs at least two predictors"));
    }
    if n <= m {
        return Err(Error::RankDeficient { rows: n, params: m });
    }
    let cols: Vec<Vec<f64>> = (0..m).map(|j| centred(&data.column(j))).collect();
    for (j, c) in cols.iter().enumerate() {
        if c.iter().all(|&v| v == 0.0) {
            return Err(Error::DegenerateVariance {
                feature: data.features()[j].name.clone(),
            });
        }
    }
    Ok((0..m)
        .map(|j| {
            let others: Vec<&[f64]> = (0..m).filter(|&k| k != j).map(|k| cols[k].as_slice()).collect();
            vif_of(&cols[j], &others)
        })
        .collect())
}

/// Removes the predictor with the largest VIF while that VIF exceeds
/// `threshold`, recomputing after every removal. Equal VIFs remove the
/// later column first.
pub fn vif_filter(data: &TabularDataset, threshold: f64) -> Result<(TabularDataset, VifReport)> {
    if data.n_features() < 2 {
        return Err(Error::arg("VIF filtering needs at least two predictors"));
    }
    if threshold.is_nan() || threshold < 1.0 {
        return Err(Error::arg("VIF threshold must be at least 1"));
    }
    let mut current = data.clone();
    let mut removed = Vec::new();
    loop {
        if current.n_features() < 2 {
            let retained = current
                .features()
                .iter()
                .map(|f| (f.name.clone(), 1.0))
                .collect();
            return Ok((current, VifReport { removed, retained }));
        }
        let vifs = vif_values(&current)?;
        let (worst, &worst_vif) = vifs
            .iter()
            .enumerate()
            // max_by keeps the last of equal maxima
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("at least two predictors");
        if worst_vif <= threshold {
            let retained = current
                .features()
                .iter()
                .zip(vifs)
                .map(|(f, v)| (f.name.clone(), v))
                .collect();
            return Ok((current, VifReport { removed, retained }));
        }
        removed.push((current.features()[worst].name.clone(), worst_vif));
        let keep: Vec<usize> = (0..current.n_features()).filter(|&j| j != worst).collect();
        current = current.select_features(&keep)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dataset(cols: &[Vec<f64>]) -> TabularDataset {
        let n = cols[0].len();
        let x = (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
        TabularDataset::ungrouped(cols.len(), x, vec![0.0; n]).unwrap()
    }

    #[test]
    fn duplicate_column_is_removed_once() {
        let a = vec![1.0, 2.0, 4.0, 3.0, 7.0, 5.0];
        let b = vec![0.5, -1.0, 2.0, 0.0, 1.0, 3.0];
        let d = dataset(&[a.clone(), b, a]);
        let (kept, report) = vif_filter(&d, DEFAULT_VIF_THRESHOLD).unwrap();
        assert_eq!(report.removed.len(), 1);
        assert_eq!(report.removed[0].0, "x2");
        assert!(report.removed[0].1.is_infinite());
        assert_eq!(kept.feature_names(), vec!["x0", "x1"]);
    }

    #[test]
    fn known_r_squared() {
        // x1 = x0 + e with e orthogonal to x0 and both centred: R² = |x0|² / (|x0|² + |e|²)
        let x0 = vec![-1.0, 1.0, -1.0, 1.0];
        let e = vec![1.0, 1.0, -1.0, -1.0];
        let x1: Vec<f64> = x0.iter().zip(&e).map(|(a, b)| a + 2.0 * b).collect();
        let v = vif_values(&dataset(&[x0, x1])).unwrap();
        // R² = 4 / (4 + 16) → VIF = 1 / 0.8 = 1.25
        assert!((v[0] - 1.25).abs() < 1e-12);
        assert!((v[1] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn constant_column_errors() {
        let d = dataset(&[vec![1.0, 2.0, 3.0, 4.0], vec![2.0; 4]]);
        assert!(matches!(vif_values(&d), Err(Error::DegenerateVariance { .. })));
    }

    #[test]
    fn too_few_rows_errors() {
        let d = dataset(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(vif_values(&d), Err(Error::RankDeficient { .. })));
    }
}
