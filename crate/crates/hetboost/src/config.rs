//! Run configuration, persisted as TOML in every manifest.

use std::path::PathBuf;

use hetboost_core::dependence::{GridStrategy, DEFAULT_GRID_POINTS};
use hetboost_core::shap::DEFAULT_BACKGROUND_ROWS;
use hetboost_core::tuning::{TuningGrid, DEFAULT_FOLDS};
use hetboost_core::vif::DEFAULT_VIF_THRESHOLD;
use hetboost_core::{ShapBackend, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// TOML integers are signed 64-bit, so seeds above `i64::MAX` are written
/// as decimal strings.
pub mod seed_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*v) {
            Ok(i) => s.serialize_i64(i),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Boosting settings. Tree count and learning rate are optional: when
/// unset they come from cross-validation, or from the library defaults if
/// tuning is off. When set they override the CV winner, which is still
/// reported in the CV table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_trees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    pub max_depth: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub min_child_cover: usize,
}

impl Default for TrainSettings {
    fn default() -> Self {
        let d = TrainConfig::default();
        TrainSettings {
            n_trees: None,
            learning_rate: None,
            max_depth: d.max_depth,
            lambda: d.lambda,
            gamma: d.gamma,
            min_child_cover: d.min_child_cover,
        }
    }
}

impl TrainSettings {
    /// The fixed part of the configuration with the given tree count and rate.
    pub fn config(&self, n_trees: usize, learning_rate: f64) -> TrainConfig {
        TrainConfig {
            n_trees,
            learning_rate,
            max_depth: self.max_depth,
            lambda: self.lambda,
            gamma: self.gamma,
            min_child_cover: self.min_child_cover,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningSettings {
    pub folds: usize,
    /// `[first, last, step]` tree counts.
    pub trees: [usize; 3],
    /// `[first, last, step]` learning rates.
    pub learning_rates: [f64; 3],
}

impl Default for TuningSettings {
    fn default() -> Self {
        TuningSettings { folds: DEFAULT_FOLDS, trees: [100, 200, 10], learning_rates: [0.01, 0.05, 0.01] }
    }
}

impl TuningSettings {
    pub fn grid(&self, train: &TrainSettings) -> Result<TuningGrid> {
        let [lo, hi, step] = self.trees;
        let [rlo, rhi, rstep] = self.learning_rates;
        Ok(TuningGrid::stepped((lo, hi, step), (rlo, rhi, rstep), train.config(lo, rlo))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    pub strategy: GridStrategy,
    pub points: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings { strategy: GridStrategy::Quantile, points: DEFAULT_GRID_POINTS }
    }
}

impl std::str::FromStr for GridSettings {
    type Err = String;

    /// `quantile:50`, `uniform:25`, or just a strategy name.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, count) = match s.split_once(':') {
            Some((n, c)) => (n, Some(c)),
            None => (s, None),
        };
        let strategy: GridStrategy = name.parse().map_err(|_| format!("unknown grid strategy `{name}`"))?;
        let points = match count {
            Some(c) => c.parse().map_err(|_| format!("invalid grid size `{c}`"))?,
            None => DEFAULT_GRID_POINTS,
        };
        if points == 0 {
            return Err("grid size must be positive".into());
        }
        Ok(GridSettings { strategy, points })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schema: PathBuf,
    pub out: PathBuf,
    #[serde(with = "seed_serde")]
    pub seed: u64,
    /// Overrides the schema's `group_label` column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_column: Option<String>,
    pub vif_threshold: f64,
    pub tune: bool,
    pub shap: ShapBackend,
    pub background_rows: usize,
    /// Features to draw curves for; empty means every retained predictor.
    pub pdp_features: Vec<String>,
    /// Also export per-row ICE curves.
    pub keep_ice: bool,
    pub grid: GridSettings,
    pub train: TrainSettings,
    pub tuning: TuningSettings,
}

impl RunConfig {
    pub fn new(input: PathBuf, schema: PathBuf, out: PathBuf) -> Self {
        RunConfig {
            input,
            schema,
            out,
            seed: 0,
            group_column: None,
            vif_threshold: DEFAULT_VIF_THRESHOLD,
            tune: true,
            shap: ShapBackend::Tree,
            background_rows: DEFAULT_BACKGROUND_ROWS,
            pdp_features: Vec::new(),
            keep_ice: false,
            grid: GridSettings::default(),
            train: TrainSettings::default(),
            tuning: TuningSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vif_threshold >= 1.0) {
            return Err(Error::Config("VIF threshold must be at least 1".into()));
        }
        if self.background_rows == 0 {
            return Err(Error::Config("background_rows must be positive".into()));
        }
        if self.grid.points == 0 {
            return Err(Error::Config("grid size must be positive".into()));
        }
        if self.tune && self.tuning.folds < 2 {
            return Err(Error::Config("cross-validation needs at least 2 folds".into()));
        }
        let mut fixed = self.train.config(
            self.train.n_trees.unwrap_or(1),
            self.train.learning_rate.unwrap_or(TrainConfig::default().learning_rate),
        );
        fixed.n_trees = fixed.n_trees.max(1);
        fixed.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.tune {
            self.tuning.grid(&self.train).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serialises")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
