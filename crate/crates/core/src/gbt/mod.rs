//! Second-order gradient boosting of regression trees under squared error.
//!
//! `prediction(x) = base_score + learning_rate * sum_k tree_k(x)`, where each
//! tree is grown greedily on Newton statistics (gradients `g = pred - y`,
//! hessians `h = 1`): a split maximises
//! `½ [G_L²/(H_L+λ) + G_R²/(H_R+λ) − G²/(H+λ)] − γ` over midpoints between
//! consecutive distinct feature values, and a leaf takes `w = −G/(H+λ)`.

mod fit;
mod tree;

pub use fit::{fit, fit_matrix, training_curve, TrainConfig};
pub use tree::{Ensemble, RegressionTree, TreeNode};
