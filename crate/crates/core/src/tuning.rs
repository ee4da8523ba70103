//! Exhaustive grid search over tree count and learning rate with k-fold
//! cross-validation.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::gbt::{fit_matrix, TrainConfig};
use crate::seed::fnv1a;

pub const DEFAULT_FOLDS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TuningGrid {
    tree_counts: Vec<usize>,
    learning_rates: Vec<f64>,
    /// Supplies every other hyperparameter.
    fixed: TrainConfig,
}

impl TuningGrid {
    pub fn new(tree_counts: Vec<usize>, learning_rates: Vec<f64>, fixed: TrainConfig) -> Result<Self> {
        if tree_counts.is_empty() || learning_rates.is_empty() {
            return Err(Error::arg("tuning grid axes must be nonempty"));
        }
        if tree_counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg("tree counts must be strictly increasing"));
        }
        if learning_rates.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::arg("learning rates must be strictly increasing"));
        }
        for &lr in &learning_rates {
            TrainConfig { learning_rate: lr, ..fixed }.validate()?;
        }
        Ok(TuningGrid { tree_counts, learning_rates, fixed })
    }

    /// Evenly stepped axes: trees `lo..=hi` by `step`, rates `k · rate_step`
    /// for `k` spanning `[rate_lo, rate_hi]`.
    pub fn stepped(
        trees: (usize, usize, usize),
        rates: (f64, f64, f64),
        fixed: TrainConfig,
    ) -> Result<Self> {
        let (lo, hi, step) = trees;
        if step == 0 || lo > hi {
            return Err(Error::arg("invalid tree-count range"));
        }
        let (rlo, rhi, rstep) = rates;
        if !(rstep > 0.0) || !(rlo <= rhi) {
            return Err(Error::arg("invalid learning-rate range"));
        }
        let first = libm::round(rlo / rstep) as i64;
        let last = libm::round(rhi / rstep) as i64;
        // k / (1 / step) gives 0.01, 0.02, ... exactly as decimal literals would
        let inv = libm::round(1.0 / rstep);
        let learning_rates = (first..=last)
            .map(|k| if (inv * rstep - 1.0).abs() < 1e-12 { k as f64 / inv } else { k as f64 * rstep })
            .collect();
        Self::new((lo..=hi).step_by(step).collect(), learning_rates, fixed)
    }

    /// Trees 100 to 200 by 10, rates 0.01 to 0.05 by 0.01, depth 5: 55 configurations.
    pub fn standard() -> Self {
        Self::stepped((100, 200, 10), (0.01, 0.05, 0.01), TrainConfig::default())
            .expect("static grid is valid")
    }

    pub fn tree_counts(&self) -> &[usize] {
        &self.tree_counts
    }

    pub fn learning_rates(&self) -> &[f64] {
        &self.learning_rates
    }

    pub fn fixed(&self) -> &TrainConfig {
        &self.fixed
    }

    pub fn len(&self) -> usize {
        self.tree_counts.len() * self.learning_rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All configurations, tree count major, learning rate minor.
    pub fn configs(&self) -> impl Iterator<Item = TrainConfig> + '_ {
        self.tree_counts.iter().flat_map(move |&n_trees| {
            self.learning_rates
                .iter()
                .map(move |&learning_rate| TrainConfig { n_trees, learning_rate, ..self.fixed })
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvResult {
    pub config: TrainConfig,
    pub fold_rmse: Vec<f64>,
    pub mean_rmse: f64,
    /// Hash of the fold partition the config was scored on.
    pub folds_hash: u64,
}

/// Shuffles `0..n` with `seed` and deals it into `k` folds whose sizes
/// differ by at most one (the first `n % k` folds are larger). Each fold is
/// returned in ascending order.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::arg("k-fold cross-validation needs k >= 2"));
    }
    if k > n {
        return Err(Error::arg(format!("cannot split {n} rows into {k} folds")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut crate::seed::rng(seed));
    let (base, extra) = (n / k, n % k);
    let mut start = 0;
    Ok((0..k)
        .map(|f| {
            let len = base + usize::from(f < extra);
            let mut fold = idx[start..start + len].to_vec();
            start += len;
            fold.sort_unstable();
            fold
        })
        .collect())
}

pub fn folds_hash(folds: &[Vec<usize>]) -> u64 {
    fnv1a(
        folds
            .iter()
            .flat_map(|f| f.iter().map(|&i| i as u64).chain(core::iter::once(u64::MAX)))
            .flat_map(u64::to_le_bytes),
    )
}

fn gather(data: &TabularDataset, rows: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let x = rows.iter().flat_map(|&i| data.row(i).iter().copied()).collect();
    let y = rows.iter().map(|&i| data.target()[i]).collect();
    (x, y)
}

/// Scores every grid configuration on the same folds and returns the one
/// with the lowest mean RMSE (ties go to fewer trees, then the smaller rate)
/// together with the full table in [`TuningGrid::configs`] order.
///
/// Boosting rounds do not depend on the total tree count, so each
/// (rate, fold) pair is fitted once with the largest count and scored at
/// every smaller count from the partial sums.
pub fn grid_search(data: &TabularDataset, grid: &TuningGrid, k: usize, seed: u64) -> Result<(TrainConfig, Vec<CvResult>)> {
    let folds = kfold_split(data.n_rows(), k, seed)?;
    let hash = folds_hash(&folds);
    let m = data.n_features();
    let max_trees = *grid.tree_counts.last().expect("nonempty axis");
    let n_counts = grid.tree_counts.len();

    // rmse[rate][count][fold]
    let mut rmse = alloc::vec![alloc::vec![alloc::vec![0.0f64; k]; n_counts]; grid.learning_rates.len()];
    for (ri, &learning_rate) in grid.learning_rates.iter().enumerate() {
        for (fi, held_out) in folds.iter().enumerate() {
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(f, _)| f != fi)
                .flat_map(|(_, fold)| fold.iter().copied())
                .collect();
            let (tx, ty) = gather(data, &train);
            let config = TrainConfig { n_trees: max_trees, learning_rate, ..grid.fixed };
            let model = fit_matrix(&tx, m, &ty, &config).map_err(|e| Error::Tuning {
                n_trees: max_trees,
                learning_rate,
                source: Box::new(e),
            })?;
            let (vx, vy) = gather(data, held_out);
            let mut leaf_sum = alloc::vec![0.0f64; vy.len()];
            let mut next = 0;
            // a zero tree count scores the base score alone
            if grid.tree_counts[0] == 0 {
                let pred = alloc::vec![model.base_score(); vy.len()];
                rmse[ri][0][fi] = crate::stats::rmse(&pred, &vy);
                next = 1;
            }
            for (t, tree) in model.trees().iter().enumerate() {
                for (s, row) in leaf_sum.iter_mut().zip(vx.chunks_exact(m)) {
                    *s += tree.predict(row);
                }
                while next < n_counts && grid.tree_counts[next] == t + 1 {
                    let pred: Vec<f64> = leaf_sum.iter().map(|&s| model.combine(s)).collect();
                    rmse[ri][next][fi] = crate::stats::rmse(&pred, &vy);
                    next += 1;
                }
            }
        }
    }

    let table: Vec<CvResult> = grid
        .tree_counts
        .iter()
        .enumerate()
        .flat_map(|(ci, &n_trees)| {
            let rmse = &rmse;
            grid.learning_rates.iter().enumerate().map(move |(ri, &learning_rate)| {
                let fold_rmse = rmse[ri][ci].clone();
                let mean_rmse = fold_rmse.iter().sum::<f64>() / k as f64;
                CvResult {
                    config: TrainConfig { n_trees, learning_rate, ..grid.fixed },
                    fold_rmse,
                    mean_rmse,
                    folds_hash: hash,
                }
            })
        })
        .collect();
    let best = select_best(&table).expect("grid is nonempty");
    Ok((table[best].config, table))
}

/// Index of the lowest mean RMSE; the table order already puts simpler
/// models first, so the first minimum wins.
pub fn select_best(table: &[CvResult]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in table.iter().enumerate() {
        if best.is_none_or(|b| r.mean_rmse < table[b].mean_rmse) {
            best = Some(i);
        }
    }
    best
}
