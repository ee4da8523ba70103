use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeNode {
    /// Rows with `x[feature] < threshold` go left, all others right.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        cover: usize,
    },
    Leaf { weight: f64, cover: usize },
}

impl TreeNode {
    pub fn cover(&self) -> usize {
        match *self {
            TreeNode::Split { cover, .. } | TreeNode::Leaf { cover, .. } => cover,
        }
    }
}

/// A binary regression tree stored as a node array rooted at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
}

impl RegressionTree {
    /// Validates structure: every node but the root has exactly one parent,
    /// all nodes are reachable from the root, and split covers equal the sum
    /// of their children's covers.
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::arg("a tree needs at least one node"));
        }
        let mut parents = vec![0usize; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            if let TreeNode::Split { left, right, cover, threshold, .. } = *node {
                if left >= nodes.len() || right >= nodes.len() || left == 0 || right == 0 || left == right {
                    return Err(Error::arg(format!("node {i} has invalid children")));
                }
                if !threshold.is_finite() {
                    return Err(Error::arg(format!("node {i} has a non-finite threshold")));
                }
                if nodes[left].cover() + nodes[right].cover() != cover {
                    return Err(Error::arg(format!("node {i}: cover is not the sum of its children")));
                }
                parents[left] += 1;
                parents[right] += 1;
            }
        }
        if parents[1..].iter().any(|&p| p != 1) {
            return Err(Error::arg("tree nodes must form a single binary tree"));
        }
        // with one parent per non-root node, any cycle would leave nodes unreachable
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            if core::mem::replace(&mut seen[i], true) {
                return Err(Error::arg("tree contains a cycle"));
            }
            if let TreeNode::Split { left, right, .. } = nodes[i] {
                stack.push(left);
                stack.push(right);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::arg("tree has unreachable nodes"));
        }
        Ok(RegressionTree { nodes })
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<TreeNode>) -> Self {
        RegressionTree { nodes }
    }

    pub fn leaf(weight: f64, cover: usize) -> Self {
        RegressionTree { nodes: vec![TreeNode::Leaf { weight, cover }] }
    }

    /// Depth-1 tree on `feature`.
    pub fn stump(feature: usize, threshold: f64, left: f64, right: f64) -> Self {
        RegressionTree {
            nodes: vec![
                TreeNode::Split { feature, threshold, left: 1, right: 2, cover: 2 },
                TreeNode::Leaf { weight: left, cover: 1 },
                TreeNode::Leaf { weight: right, cover: 1 },
            ],
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }

    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { .. } => return i,
                TreeNode::Split { feature, threshold, left, right, .. } => {
                    i = if x[feature] < threshold { left } else { right };
                }
            }
        }
    }

    /// Leaf weight reached by `x`. NaN feature values route right.
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self.nodes[self.leaf_index(x)] {
            TreeNode::Leaf { weight, .. } => weight,
            TreeNode::Split { .. } => unreachable!(),
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn max_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Split { feature, .. } => Some(*feature),
                TreeNode::Leaf { .. } => None,
            })
            .max()
    }

    pub fn uses_feature(&self, f: usize) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n, TreeNode::Split { feature, .. } if *feature == f))
    }

    /// Copy with every leaf weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match *n {
                TreeNode::Leaf { weight, cover } => TreeNode::Leaf { weight: weight * c, cover },
                split => split,
            })
            .collect();
        RegressionTree { nodes }
    }
}

/// Additive tree ensemble: `base_score + learning_rate * Σ_k tree_k(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    base_score: f64,
    learning_rate: f64,
    n_features: usize,
    trees: Vec<RegressionTree>,
}

impl Ensemble {
    pub fn new(base_score: f64, learning_rate: f64, n_features: usize, trees: Vec<RegressionTree>) -> Result<Self> {
        if !base_score.is_finite() {
            return Err(Error::arg("base score must be finite"));
        }
        if !(0.0..=1.0).contains(&learning_rate) {
            return Err(Error::arg("learning rate must lie in [0, 1]"));
        }
        if let Some(f) = trees.iter().filter_map(RegressionTree::max_feature).max() {
            if f >= n_features {
                return Err(Error::arg(format!("tree splits on feature {f} but the model has {n_features}")));
            }
        }
        Ok(Ensemble { base_score, learning_rate, n_features, trees })
    }

    pub fn base_score(&self) -> f64 {
        self.base_score
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, got: x.len() });
        }
        Ok(self.predict_unchecked(x))
    }

    /// Caller guarantees `x.len() == n_features()`.
    #[inline]
    pub fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        self.combine(sum)
    }

    /// Applies base score and shrinkage to a raw sum of leaf weights.
    #[inline]
    pub(crate) fn combine(&self, leaf_sum: f64) -> f64 {
        self.base_score + self.learning_rate * leaf_sum
    }

    /// Predictions for a row-major matrix with `n_features()` columns.
    pub fn predict_rows(&self, x: &[f64]) -> Result<Vec<f64>> {
        let m = self.n_features.max(1);
        if x.len() % m != 0 {
            return Err(Error::DimensionMismatch { expected: m, got: x.len() % m });
        }
        Ok(x.chunks_exact(m).map(|r| self.predict_unchecked(r)).collect())
    }

    /// Copy with base score and every leaf weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Ensemble {
            base_score: self.base_score * c,
            learning_rate: self.learning_rate,
            n_features: self.n_features,
            trees: self.trees.iter().map(|t| t.scaled(c)).collect(),
        }
    }

    /// The first `k` trees of this ensemble.
    pub fn truncated(&self, k: usize) -> Self {
        Ensemble {
            trees: self.trees[..k.min(self.trees.len())].to_vec(),
            ..self.clone()
        }
    }
}
