#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hetboost::commands::{synth, SynthOutput};
use hetboost::RunConfig;
use hetboost_core::synth::SyntheticSpec;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hetboost")
}

/// Writes a small three-group demo dataset under `dir`.
pub fn small_synth(dir: &Path, rows: usize) -> SynthOutput {
    let spec = SyntheticSpec::demo(&["A", "B", "C"], rows, 0.5, 0);
    synth(&spec, 11, &dir.join("data")).unwrap().0
}

/// A configuration small enough to run in well under a second.
pub fn quick_config(data: &SynthOutput, out: PathBuf) -> RunConfig {
    let mut c = RunConfig::new(data.data.clone(), data.schema.clone(), out);
    c.seed = 5;
    c.tuning.trees = [10, 30, 10];
    c.tuning.learning_rates = [0.1, 0.3, 0.1];
    c.tuning.folds = 3;
    c.train.max_depth = 3;
    c.background_rows = 32;
    c.grid.points = 10;
    c
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
