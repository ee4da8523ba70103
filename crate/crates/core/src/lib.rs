//! Explainable gradient boosting for grouped tabular data.
//!
//! The crate fits second-order boosted regression trees ([`gbt`]), tunes them
//! with exhaustive k-fold grid search ([`tuning`]), and explains them with
//! exact Shapley attributions and group-conditional importance ([`shap`]) as
//! well as the partial-dependence family PDP / ICE / CPDP / CIPDP
//! ([`dependence`]). Data preparation lives in [`dataset`], [`vif`], [`prep`]
//! and [`synth`].
//!
//! Everything here is pure computation over in-memory values, so the crate is
//! `no_std` and only needs `alloc`. File formats, the CLI and any IO live in
//! the companion `hetboost` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod dependence;
pub mod error;
pub mod gbt;
pub mod prep;
pub mod seed;
pub mod shap;
pub mod stats;
pub mod synth;
pub mod tuning;
pub mod vif;

pub use dataset::{Category, FeatureMeta, GroupSpec, Role, TabularDataset};
pub use error::{Error, Result};
pub use gbt::{Ensemble, RegressionTree, TrainConfig, TreeNode};
pub use shap::{ImportanceReport, ShapBackend, ShapRow};
