use alloc::vec::Vec;

use super::tree::{Ensemble, RegressionTree, TreeNode};
use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::stats::rmse;

/// Boosting hyperparameters. Defaults: 200 trees, rate 0.05, depth 5,
/// `lambda = 1`, `gamma = 0`, `min_child_cover = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainConfig {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    /// L2 penalty on leaf weights.
    pub lambda: f64,
    /// Minimum gain required to split.
    pub gamma: f64,
    /// Minimum number of training rows in each child of a split.
    pub min_child_cover: usize,
    /// Reserved for stochastic variants; exact greedy fitting draws no randomness.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_trees: 200,
            learning_rate: 0.05,
            max_depth: 5,
            lambda: 1.0,
            gamma: 0.0,
            min_child_cover: 1,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.learning_rate) {
            return Err(Error::arg("learning_rate must lie in [0, 1]"));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::arg("lambda must be finite and non-negative"));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::arg("gamma must be finite and non-negative"));
        }
        if self.min_child_cover < 1 {
            return Err(Error::arg("min_child_cover must be at least 1"));
        }
        Ok(())
    }
}

pub fn fit(data: &TabularDataset, config: &TrainConfig) -> Result<Ensemble> {
    fit_matrix(data.x(), data.n_features(), data.target(), config)
}

/// Fits on a row-major matrix with `m` columns.
pub fn fit_matrix(x: &[f64], m: usize, y: &[f64], config: &TrainConfig) -> Result<Ensemble> {
    config.validate()?;
    let n = y.len();
    if n < 2 {
        return Err(Error::arg("boosting needs at least two rows"));
    }
    if m == 0 {
        return Err(Error::arg("boosting needs at least one feature"));
    }
    if x.len() != n * m {
        return Err(Error::DimensionMismatch { expected: n * m, got: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::arg("training data must be finite"));
    }

    let base_score = crate::stats::mean(y);
    let presorted: Vec<Vec<u32>> = (0..m)
        .map(|f| {
            let mut idx: Vec<u32> = (0..n as u32).collect();
            idx.sort_by(|&a, &b| x[a as usize * m + f].total_cmp(&x[b as usize * m + f]).then(a.cmp(&b)));
            idx
        })
        .collect();

    let mut leaf_sum = alloc::vec![0.0f64; n];
    let mut grad = alloc::vec![0.0f64; n];
    let mut trees = Vec::with_capacity(config.n_trees);
    for _ in 0..config.n_trees {
        for i in 0..n {
            let pred = base_score + config.learning_rate * leaf_sum[i];
            grad[i] = pred - y[i];
        }
        let mut grower = Grower { x, m, grad: &grad, config, nodes: Vec::new(), leaf_of: alloc::vec![0; n] };
        let rows: Vec<u32> = (0..n as u32).collect();
        grower.grow(rows, presorted.clone(), 0);
        let Grower { nodes, leaf_of, .. } = grower;
        for (i, &leaf) in leaf_of.iter().enumerate() {
            if let TreeNode::Leaf { weight, .. } = nodes[leaf] {
                leaf_sum[i] += weight;
            }
        }
        trees.push(RegressionTree::from_nodes_unchecked(nodes));
    }
    Ensemble::new(base_score, config.learning_rate, m, trees)
}

struct Grower<'a> {
    x: &'a [f64],
    m: usize,
    grad: &'a [f64],
    config: &'a TrainConfig,
    nodes: Vec<TreeNode>,
    leaf_of: Vec<usize>,
}

struct BestSplit {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Grower<'_> {
    fn value(&self, row: u32, f: usize) -> f64 {
        self.x[row as usize * self.m + f]
    }

    /// `rows` is in ascending row order; `sorted[f]` holds the same rows
    /// ordered by feature `f`. Returns the node index.
    fn grow(&mut self, rows: Vec<u32>, sorted: Vec<Vec<u32>>, depth: usize) -> usize {
        let g_sum: f64 = rows.iter().map(|&r| self.grad[r as usize]).sum();
        let h_sum = rows.len() as f64;
        let cover = rows.len();
        let idx = self.nodes.len();

        let best = if depth < self.config.max_depth && cover >= 2 * self.config.min_child_cover {
            self.best_split(&sorted, g_sum, h_sum)
        } else {
            None
        };

        let Some(best) = best else {
            let weight = -g_sum / (h_sum + self.config.lambda) + 0.0;
            self.nodes.push(TreeNode::Leaf { weight, cover });
            for &r in &rows {
                self.leaf_of[r as usize] = idx;
            }
            return idx;
        };

        // placeholder, patched once the children exist
        self.nodes.push(TreeNode::Leaf { weight: 0.0, cover });
        let (f, t) = (best.feature, best.threshold);
        let goes_left = |s: &Self, r: u32| s.value(r, f) < t;
        let (left_rows, right_rows): (Vec<u32>, Vec<u32>) = rows.iter().partition(|&&r| goes_left(self, r));
        let mut left_sorted = Vec::with_capacity(self.m);
        let mut right_sorted = Vec::with_capacity(self.m);
        for list in sorted {
            let (l, r): (Vec<u32>, Vec<u32>) = list.into_iter().partition(|&r| goes_left(self, r));
            left_sorted.push(l);
            right_sorted.push(r);
        }
        let left = self.grow(left_rows, left_sorted, depth + 1);
        let right = self.grow(right_rows, right_sorted, depth + 1);
        self.nodes[idx] = TreeNode::Split { feature: f, threshold: t, left, right, cover };
        idx
    }

    /// Exact greedy search. Features are scanned in index order and
    /// thresholds in increasing order; only a strictly larger gain replaces
    /// the incumbent, so ties resolve to the lowest feature, then the
    /// smallest threshold.
    fn best_split(&self, sorted: &[Vec<u32>], g_sum: f64, h_sum: f64) -> Option<BestSplit> {
        let lambda = self.config.lambda;
        let min_cover = self.config.min_child_cover;
        let parent_score = g_sum * g_sum / (h_sum + lambda);
        let mut best: Option<BestSplit> = None;
        for (f, list) in sorted.iter().enumerate() {
            let n = list.len();
            let mut g_left = 0.0;
            for k in 0..n - 1 {
                g_left += self.grad[list[k] as usize];
                let left_count = k + 1;
                if left_count < min_cover || n - left_count < min_cover {
                    continue;
                }
                let a = self.value(list[k], f);
                let b = self.value(list[k + 1], f);
                if !(a < b) {
                    continue;
                }
                let h_left = left_count as f64;
                let h_right = h_sum - h_left;
                let g_right = g_sum - g_left;
                let gain = 0.5
                    * (g_left * g_left / (h_left + lambda) + g_right * g_right / (h_right + lambda) - parent_score)
                    - self.config.gamma;
                if gain > 0.0 && best.as_ref().is_none_or(|bs| gain > bs.gain) {
                    best = Some(BestSplit { gain, feature: f, threshold: midpoint(a, b) });
                }
            }
        }
        best
    }
}

/// Midpoint of `a < b` that still separates them under `x < t`.
fn midpoint(a: f64, b: f64) -> f64 {
    let t = a + (b - a) * 0.5;
    if t > a && t <= b {
        t
    } else {
        b
    }
}

/// Training RMSE after each boosting round, starting with the base score
/// alone; length `K + 1`.
pub fn training_curve(model: &Ensemble, data: &TabularDataset) -> Result<Vec<f64>> {
    if data.n_features() != model.n_features() {
        return Err(Error::DimensionMismatch { expected: model.n_features(), got: data.n_features() });
    }
    let n = data.n_rows();
    let mut leaf_sum = alloc::vec![0.0f64; n];
    let mut pred: Vec<f64> = leaf_sum.iter().map(|&s| model.combine(s)).collect();
    let mut curve = Vec::with_capacity(model.trees().len() + 1);
    curve.push(rmse(&pred, data.target()));
    for tree in model.trees() {
        for (i, row) in data.rows().enumerate() {
            leaf_sum[i] += tree.predict(row);
            pred[i] = model.combine(leaf_sum[i]);
        }
        curve.push(rmse(&pred, data.target()));
    }
    Ok(curve)
}
