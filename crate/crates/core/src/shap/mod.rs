//! Shapley attributions of ensemble predictions and the importance measures
//! built on them.
//!
//! Both algorithms explain the same game: the value of a coalition `S` is the
//! prediction averaged over background rows `b`, with features in `S` taken
//! from the explained point and the rest from `b`. [`shap_exact`] enumerates
//! every coalition; [`shap_tree`] walks each tree once per background row and
//! is polynomial in tree size.

mod exact;
mod importance;
mod tree;

use alloc::vec::Vec;

use rand::seq::index;

pub use exact::{shap_exact, MAX_EXACT_FEATURES};
pub use importance::{importance, CategoryImportance, ImportanceReport, Scope, ScopeImportance};
pub use tree::shap_tree;

use crate::dataset::TabularDataset;
use crate::error::{Error, Result};
use crate::gbt::Ensemble;

/// Default cap on background rows.
pub const DEFAULT_BACKGROUND_ROWS: usize = 256;

/// Attribution of one prediction: `base + Σ phi = prediction`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapRow {
    pub base: f64,
    pub phi: Vec<f64>,
}

impl ShapRow {
    /// `base + Σ phi`, summed in feature order.
    pub fn total(&self) -> f64 {
        self.base + self.phi.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ShapBackend {
    Exact,
    #[default]
    Tree,
}

impl ShapBackend {
    pub fn explain(self, model: &Ensemble, x: &[f64], background: &[f64]) -> Result<ShapRow> {
        match self {
            ShapBackend::Exact => shap_exact(model, x, background),
            ShapBackend::Tree => shap_tree(model, x, background),
        }
    }
}

pub(crate) fn check_inputs(model: &Ensemble, x: &[f64], background: &[f64]) -> Result<usize> {
    let m = model.n_features();
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    if background.is_empty() {
        return Err(Error::arg("background set is empty"));
    }
    if m == 0 {
        return Ok(background.len());
    }
    if background.len() % m != 0 {
        return Err(Error::DimensionMismatch { expected: m, got: background.len() % m });
    }
    Ok(background.len() / m)
}

/// Background rows for explanation: all rows when there are at most
/// `max_rows`, otherwise a seeded sample kept in original row order.
pub fn default_background(data: &TabularDataset, max_rows: usize, seed: u64) -> Vec<f64> {
    let n = data.n_rows();
    if n <= max_rows {
        return data.x().to_vec();
    }
    let mut picks = index::sample(&mut crate::seed::rng(seed), n, max_rows).into_vec();
    picks.sort_unstable();
    picks.iter().flat_map(|&i| data.row(i).iter().copied()).collect()
}

/// Explains every row of `data`, in row order.
pub fn shap_matrix(
    model: &Ensemble,
    data: &TabularDataset,
    background: &[f64],
    backend: ShapBackend,
) -> Result<Vec<ShapRow>> {
    data.rows()
        .take(data.n_rows())
        .map(|row| backend.explain(model, row, background))
        .collect()
}
