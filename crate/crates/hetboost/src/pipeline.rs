//! The batch pipeline: load, VIF filter, optional grid search, fit, explain,
//! aggregate and export.
//!
//! Stages run one after another; parallelism stays inside a stage and never
//! changes results, since rows and features are reassembled in order. All
//! randomness comes from the root seed through [`hetboost_core::seed`].

use std::path::{Path, PathBuf};

use hetboost_core::dependence::{curve_set, CurveSet};
use hetboost_core::seed::{self, stage as seed_stage};
use hetboost_core::shap::{default_background, importance};
use hetboost_core::tuning::{grid_search, CvResult};
use hetboost_core::vif::{vif_filter, VifReport};
use hetboost_core::{gbt, Ensemble, ImportanceReport, ShapRow, TabularDataset, TrainConfig};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::csv_io::load_csv;
use crate::error::{Error, Result};
use crate::export;
use crate::manifest::{FileHash, FittedModel, Manifest, MANIFEST_FILE};
use crate::model_io;
use crate::schema::Schema;

/// Artifact file names inside the output directory.
pub mod artifact {
    pub const VIF: &str = "vif.csv";
    pub const CV: &str = "cv.csv";
    pub const MODEL: &str = "model.txt";
    pub const SHAP: &str = "shap.csv";
    pub const IMPORTANCE_JSON: &str = "importance.json";
    pub const IMPORTANCE_FEATURES: &str = "importance_features.csv";
    pub const IMPORTANCE_CATEGORIES: &str = "importance_categories.csv";
    pub const CURVES: &str = "curves.csv";
    pub const RUG: &str = "rug.csv";
    pub const ICE: &str = "ice.csv";
}

/// Runs `f`, tagging any failure with the stage name.
pub fn stage<T>(name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    log::info!("stage {name}");
    f().map_err(|e| Error::Stage { stage: name, source: Box::new(e) })
}

/// In-memory results of every stage.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// The dataset after VIF filtering; everything downstream uses it.
    pub data: TabularDataset,
    pub vif: VifReport,
    pub cv: Option<Vec<CvResult>>,
    /// CV winner, if tuning ran.
    pub cv_best: Option<TrainConfig>,
    /// Configuration the model was fitted with.
    pub train: TrainConfig,
    pub model: Ensemble,
    pub shap: Vec<ShapRow>,
    pub importance: ImportanceReport,
    pub curves: Vec<CurveSet>,
}

/// Loads the input with the configured schema and group column.
pub fn load(config: &RunConfig) -> Result<TabularDataset> {
    let mut schema = Schema::load(&config.schema)?;
    if let Some(col) = &config.group_column {
        schema = schema.with_group_column(col)?;
    }
    schema.group_column()?;
    let data = load_csv(&config.input, &schema)?;
    if data.group_spec().index_of("global").is_some() {
        return Err(Error::Label("`global` is reserved for the all-rows scope and cannot be a group label".into()));
    }
    Ok(data)
}

/// Everything after loading. Pure: the same data and configuration give
/// bit-identical results.
pub fn analyze(config: &RunConfig, data: &TabularDataset) -> Result<Analysis> {
    config.validate()?;
    let root = config.seed;

    let (data, vif) = stage("vif", || {
        if data.n_features() < 2 {
            let retained = data.feature_names().iter().map(|n| (n.to_string(), 1.0)).collect();
            return Ok((data.clone(), VifReport { removed: Vec::new(), retained }));
        }
        Ok(vif_filter(data, config.vif_threshold)?)
    })?;
    for (name, v) in &vif.removed {
        log::info!("removed `{name}` (VIF {v})");
    }

    let (cv, cv_best) = if config.tune {
        let (best, table) = stage("tune", || {
            let grid = config.tuning.grid(&config.train)?;
            Ok(grid_search(&data, &grid, config.tuning.folds, seed::derive(root, seed_stage::FOLDS))?)
        })?;
        log::info!("CV winner: {} trees, learning rate {}", best.n_trees, best.learning_rate);
        (Some(table), Some(best))
    } else {
        (None, None)
    };

    let defaults = TrainConfig::default();
    let n_trees = config.train.n_trees.or(cv_best.map(|c| c.n_trees)).unwrap_or(defaults.n_trees);
    let learning_rate =
        config.train.learning_rate.or(cv_best.map(|c| c.learning_rate)).unwrap_or(defaults.learning_rate);
    let mut train = config.train.config(n_trees, learning_rate);
    train.seed = seed::derive(root, seed_stage::FIT);
    let model = stage("fit", || Ok(gbt::fit(&data, &train)?))?;

    let shap = stage("shap", || {
        let background = default_background(&data, config.background_rows, seed::derive(root, seed_stage::BACKGROUND));
        let rows: Vec<&[f64]> = data.rows().take(data.n_rows()).collect();
        let backend = config.shap;
        Ok(rows.par_iter().map(|r| backend.explain(&model, r, &background)).collect::<Result<Vec<_>, _>>()?)
    })?;

    let importance = stage("importance", || {
        Ok(importance(&shap, data.groups(), data.group_spec(), data.features())?)
    })?;

    let curves = stage("curves", || {
        let features = curve_features(config, &data, &vif)?;
        let grid = config.grid;
        Ok(features
            .par_iter()
            .map(|&f| curve_set(&model, &data, f, grid.strategy, grid.points, config.keep_ice))
            .collect::<Result<Vec<_>, _>>()?)
    })?;

    Ok(Analysis { data, vif, cv, cv_best, train, model, shap, importance, curves })
}

fn curve_features(config: &RunConfig, data: &TabularDataset, vif: &VifReport) -> Result<Vec<usize>> {
    if config.pdp_features.is_empty() {
        return Ok((0..data.n_features()).collect());
    }
    config
        .pdp_features
        .iter()
        .map(|name| {
            data.feature_index(name).ok_or_else(|| {
                if vif.removed.iter().any(|(n, _)| n == name) {
                    Error::Config(format!("curve feature `{name}` was removed by the VIF filter"))
                } else {
                    Error::Config(format!("curve feature `{name}` is not a predictor"))
                }
            })
        })
        .collect()
}

/// Serialises every artifact, in manifest order.
pub fn render_artifacts(a: &Analysis) -> Result<Vec<(&'static str, Vec<u8>)>> {
    let mut files: Vec<(&'static str, Vec<u8>)> = Vec::new();
    let mut add = |name: &'static str, f: &dyn Fn(&mut Vec<u8>) -> Result<()>| -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        files.push((name, buf));
        Ok(())
    };
    add(artifact::VIF, &|b| export::write_vif(&a.vif, b))?;
    if let (Some(table), Some(best)) = (&a.cv, &a.cv_best) {
        add(artifact::CV, &|b| export::write_cv(table, best, b))?;
    }
    add(artifact::MODEL, &|b| {
        b.extend_from_slice(model_io::to_text(&a.model).as_bytes());
        Ok(())
    })?;
    add(artifact::SHAP, &|b| export::write_shap(&a.shap, &a.data, b))?;
    add(artifact::IMPORTANCE_JSON, &|b| export::write_importance_json(&a.importance, b))?;
    add(artifact::IMPORTANCE_FEATURES, &|b| export::write_importance_features(&a.importance, b))?;
    add(artifact::IMPORTANCE_CATEGORIES, &|b| export::write_importance_categories(&a.importance, b))?;
    add(artifact::CURVES, &|b| export::write_curves(&a.curves, b))?;
    add(artifact::RUG, &|b| export::write_rug(&a.curves, b))?;
    if a.curves.iter().any(|c| c.ice.is_some()) {
        add(artifact::ICE, &|b| export::write_ice(&a.curves, &a.data, b))?;
    }
    Ok(files)
}

fn hash_input(path: &Path) -> Result<FileHash> {
    let content = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(FileHash::of(&path.display().to_string(), &content))
}

/// Writes `files` and then the manifest into `dir`. If any write fails,
/// everything written so far is removed again.
fn write_all(dir: &Path, files: &[(&str, Vec<u8>)], manifest: &Manifest) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    // a stale manifest must not vouch for a half-written directory
    match std::fs::remove_file(&manifest_path) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(Error::io(&manifest_path, e)),
    }
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| {
        for (name, content) in files {
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        std::fs::write(&manifest_path, manifest.to_toml()).map_err(|e| Error::io(&manifest_path, e))?;
        written.push(manifest_path.clone());
        Ok(())
    })();
    if result.is_err() {
        for path in &written {
            let _ = std::fs::remove_file(path);
        }
    }
    result
}

/// Runs the whole pipeline and writes artifacts and manifest to `config.out`.
pub fn run(config: &RunConfig) -> Result<Manifest> {
    config.validate()?;
    let (data, inputs) = stage("load", || {
        let data = load(config)?;
        Ok((data, vec![hash_input(&config.input)?, hash_input(&config.schema)?]))
    })?;
    let analysis = analyze(config, &data)?;
    stage("write", || {
        let files = render_artifacts(&analysis)?;
        let artifacts = files.iter().map(|(name, content)| FileHash::of(name, content)).collect();
        let t = &analysis.train;
        let model = FittedModel {
            n_trees: t.n_trees,
            learning_rate: t.learning_rate,
            max_depth: t.max_depth,
            lambda: t.lambda,
            gamma: t.gamma,
            min_child_cover: t.min_child_cover,
            from_cv: analysis.cv_best.is_some_and(|b| b.n_trees == t.n_trees && b.learning_rate == t.learning_rate),
            n_rows: analysis.data.n_rows(),
            features: analysis.data.feature_names().iter().map(|s| s.to_string()).collect(),
            groups: analysis.data.group_spec().labels.clone(),
        };
        let manifest = Manifest::new(config.clone(), model, inputs, artifacts);
        write_all(&config.out, &files, &manifest)?;
        Ok(manifest)
    })
}
