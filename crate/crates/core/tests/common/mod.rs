#![allow(dead_code)]

use hetboost_core::{Ensemble, RegressionTree, TreeNode};
use rand::{Rng, RngCore};

/// Random proper binary tree. Covers are consistent; leaves get cover 1.
pub fn random_tree(rng: &mut impl RngCore, m: usize, max_depth: usize) -> RegressionTree {
    let mut nodes = Vec::new();
    build(rng, m, max_depth, 0, &mut nodes);
    RegressionTree::new(nodes).expect("generated tree is valid")
}

fn build(rng: &mut impl RngCore, m: usize, max_depth: usize, depth: usize, nodes: &mut Vec<TreeNode>) -> usize {
    let idx = nodes.len();
    let split = depth < max_depth && (depth == 0 || rng.random_bool(0.75));
    if !split {
        nodes.push(TreeNode::Leaf { weight: rng.random_range(-2.0..2.0), cover: 1 });
        return idx;
    }
    nodes.push(TreeNode::Leaf { weight: 0.0, cover: 0 });
    let feature = rng.random_range(0..m);
    let threshold = rng.random_range(0.05..0.95);
    let left = build(rng, m, max_depth, depth + 1, nodes);
    let right = build(rng, m, max_depth, depth + 1, nodes);
    let cover = nodes[left].cover() + nodes[right].cover();
    nodes[idx] = TreeNode::Split { feature, threshold, left, right, cover };
    idx
}

pub fn random_ensemble(rng: &mut impl RngCore, m: usize, max_trees: usize, max_depth: usize) -> Ensemble {
    let k = rng.random_range(1..=max_trees);
    let trees = (0..k).map(|_| random_tree(rng, m, max_depth)).collect();
    Ensemble::new(rng.random_range(-1.0..1.0), rng.random_range(0.05..=1.0), m, trees).unwrap()
}

pub fn random_rows(rng: &mut impl RngCore, n: usize, m: usize) -> Vec<f64> {
    (0..n * m).map(|_| rng.random_range(0.0..1.0)).collect()
}

/// Independent tree walker: recursion over the node array.
pub fn naive_predict(model: &Ensemble, x: &[f64]) -> f64 {
    fn walk(nodes: &[TreeNode], i: usize, x: &[f64]) -> f64 {
        match nodes[i] {
            TreeNode::Leaf { weight, .. } => weight,
            TreeNode::Split { feature, threshold, left, right, .. } => {
                if x[feature] < threshold {
                    walk(nodes, left, x)
                } else {
                    walk(nodes, right, x)
                }
            }
        }
    }
    let sum: f64 = model.trees().iter().map(|t| walk(t.nodes(), 0, x)).sum();
    model.base_score() + model.learning_rate() * sum
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
