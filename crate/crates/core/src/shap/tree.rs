use alloc::vec;
use alloc::vec::Vec;

use super::{check_inputs, ShapRow};
use crate::error::Result;
use crate::gbt::{Ensemble, RegressionTree, TreeNode};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Unset,
    Foreground,
    Background,
}

/// Interventional tree Shapley values.
///
/// For each background row `b` and tree, the walk follows the shared branch
/// wherever `x` and `b` route the same way. Where they diverge on a feature
/// not yet fixed, it forks: one branch places the feature in the coalition
/// (follow `x`), the other outside (follow `b`). A leaf reached with `p`
/// foreground and `q` background features adds `w · s!(N-s-1)!/N!` with
/// `s = p - 1` to each foreground feature and subtracts `w · p!(N-p-1)!/N!`
/// from each background feature, `N = p + q`. Results are averaged over the
/// background.
pub fn shap_tree(model: &Ensemble, x: &[f64], background: &[f64]) -> Result<ShapRow> {
    let n_bg = check_inputs(model, x, background)?;
    let m = model.n_features();
    if m == 0 {
        return Ok(ShapRow { base: model.predict_unchecked(&[]), phi: Vec::new() });
    }
    let max_depth = model.trees().iter().map(RegressionTree::depth).max().unwrap_or(0);
    let weights = WeightTable::new(max_depth.min(m));

    let mut phi_sum = vec![0.0f64; m];
    let mut base_sum = 0.0f64;
    let mut walker = Walker {
        x,
        b: &[],
        side: vec![Side::Unset; m],
        path: Vec::with_capacity(max_depth),
        n_fg: 0,
        weights: &weights,
        phi: &mut phi_sum,
    };
    for b in background.chunks_exact(m) {
        walker.b = b;
        for tree in model.trees() {
            base_sum += tree.predict(b);
            walker.walk(tree.nodes(), 0);
        }
    }
    let scale = model.learning_rate() / n_bg as f64;
    Ok(ShapRow {
        base: model.base_score() + model.learning_rate() * (base_sum / n_bg as f64),
        phi: phi_sum.into_iter().map(|p| p * scale).collect(),
    })
}

/// `W[N][s] = s! (N - s - 1)! / N!` for path lengths up to the deepest tree.
struct WeightTable {
    rows: Vec<Vec<f64>>,
}

impl WeightTable {
    fn new(max_len: usize) -> Self {
        let rows = (0..=max_len)
            .map(|n| {
                (0..n)
                    .map(|s| {
                        // 1 / (N · C(N-1, s)); the product form avoids factorial overflow
                        let mut binom = 1.0f64;
                        for k in 0..s {
                            binom = binom * (n - 1 - k) as f64 / (k + 1) as f64;
                        }
                        1.0 / (n as f64 * binom)
                    })
                    .collect()
            })
            .collect();
        WeightTable { rows }
    }

    fn get(&self, n: usize, s: usize) -> f64 {
        self.rows[n][s]
    }
}

struct Walker<'a> {
    x: &'a [f64],
    b: &'a [f64],
    side: Vec<Side>,
    /// Features fixed on the current path, in the order they were fixed.
    path: Vec<usize>,
    n_fg: usize,
    weights: &'a WeightTable,
    phi: &'a mut [f64],
}

impl Walker<'_> {
    fn walk(&mut self, nodes: &[TreeNode], i: usize) {
        match nodes[i] {
            TreeNode::Leaf { weight, .. } => self.score_leaf(weight),
            TreeNode::Split { feature, threshold, left, right, .. } => {
                let x_child = if self.x[feature] < threshold { left } else { right };
                let b_child = if self.b[feature] < threshold { left } else { right };
                if x_child == b_child {
                    return self.walk(nodes, x_child);
                }
                match self.side[feature] {
                    Side::Foreground => self.walk(nodes, x_child),
                    Side::Background => self.walk(nodes, b_child),
                    Side::Unset => {
                        self.path.push(feature);
                        self.side[feature] = Side::Foreground;
                        self.n_fg += 1;
                        self.walk(nodes, x_child);
                        self.n_fg -= 1;
                        self.side[feature] = Side::Background;
                        self.walk(nodes, b_child);
                        self.side[feature] = Side::Unset;
                        self.path.pop();
                    }
                }
            }
        }
    }

    fn score_leaf(&mut self, weight: f64) {
        let n = self.path.len();
        if n == 0 || weight == 0.0 {
            return;
        }
        let p = self.n_fg;
        let gain = if p > 0 { weight * self.weights.get(n, p - 1) } else { 0.0 };
        let loss = if p < n { weight * self.weights.get(n, p) } else { 0.0 };
        for &f in &self.path {
            match self.side[f] {
                Side::Foreground => self.phi[f] += gain,
                Side::Background => self.phi[f] -= loss,
                Side::Unset => unreachable!("path features are always fixed"),
            }
        }
    }
}
