mod common;

use common::*;
use hetboost_core::gbt::{fit, training_curve, TrainConfig, TreeNode};
use hetboost_core::TabularDataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, m: usize) -> TabularDataset {
    let x = random_rows(rng, n, m);
    let y = x
        .chunks_exact(m)
        .map(|r| 3.0 * r[0] * r[0] - r[m - 1] + rng.random_range(-0.3..0.3))
        .collect();
    TabularDataset::ungrouped(m, x, y).unwrap()
}

#[test]
fn training_rmse_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let n = rng.random_range(10..80);
        let m = rng.random_range(1..4);
        let data = random_dataset(&mut rng, n, m);
        let config = TrainConfig {
            n_trees: 20,
            learning_rate: rng.random_range(0.05..=1.0),
            max_depth: rng.random_range(1..5),
            lambda: rng.random_range(0.0..2.0),
            gamma: 0.0,
            ..TrainConfig::default()
        };
        let model = fit(&data, &config).unwrap();
        let curve = training_curve(&model, &data).unwrap();
        assert_eq!(curve.len(), 21);
        for w in curve.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * w[0].max(1.0), "{curve:?}");
        }
    }
}

#[test]
fn predict_matches_naive_walker() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let m = rng.random_range(1..8);
        let model = random_ensemble(&mut rng, m, 30, 5);
        for x in random_rows(&mut rng, 10, m).chunks_exact(m) {
            assert_eq!(model.predict(x).unwrap(), naive_predict(&model, x));
        }
    }
}

#[test]
fn fitted_model_matches_naive_walker() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let data = random_dataset(&mut rng, 120, 3);
    let model = fit(&data, &TrainConfig { n_trees: 25, learning_rate: 0.3, max_depth: 3, ..Default::default() }).unwrap();
    for row in data.rows() {
        assert_eq!(model.predict(row).unwrap(), naive_predict(&model, row));
    }
    for tree in model.trees() {
        assert!(tree.depth() <= 3);
        assert_eq!(tree.nodes()[0].cover(), 120);
    }
}

#[test]
fn unregularised_single_tree_leaves_are_mean_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = rng.random_range(5..40);
        let data = random_dataset(&mut rng, n, 2);
        let config = TrainConfig { n_trees: 1, learning_rate: 1.0, max_depth: 64, lambda: 0.0, ..Default::default() };
        let model = fit(&data, &config).unwrap();
        let tree = &model.trees()[0];
        let base = model.base_score();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes().len()];
        for (i, row) in data.rows().enumerate() {
            members[tree.leaf_index(row)].push(i);
        }
        for (leaf, rows) in members.iter().enumerate().filter(|(_, r)| !r.is_empty()) {
            let mean_residual = rows.iter().map(|&i| data.target()[i] - base).sum::<f64>() / rows.len() as f64;
            match tree.nodes()[leaf] {
                TreeNode::Leaf { weight, cover } => {
                    assert_eq!(cover, rows.len());
                    assert!((weight - mean_residual).abs() < 1e-9);
                }
                TreeNode::Split { .. } => unreachable!(),
            }
        }
        // distinct x with deep trees: every training point is interpolated
        for (row, y) in data.rows().zip(data.target()) {
            assert!((model.predict(row).unwrap() - y).abs() < 1e-9);
        }
    }
}

#[test]
fn fitting_is_bit_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data = random_dataset(&mut rng, 200, 4);
    let config = TrainConfig { n_trees: 30, ..Default::default() };
    let a = fit(&data, &config).unwrap();
    let b = fit(&data, &config).unwrap();
    assert_eq!(a, b);
    for (ta, tb) in a.trees().iter().zip(b.trees()) {
        for (na, nb) in ta.nodes().iter().zip(tb.nodes()) {
            if let (TreeNode::Leaf { weight: wa, .. }, TreeNode::Leaf { weight: wb, .. }) = (na, nb) {
                assert_eq!(wa.to_bits(), wb.to_bits());
            }
        }
    }
}
