//! The `synth` and `aggregate-od` commands.

use std::path::{Path, PathBuf};

use hetboost_core::prep::aggregate_od;
use hetboost_core::seed::{self, stage as seed_stage};
use hetboost_core::synth::{gen_synthetic, GroundTruth, SyntheticSpec};

use crate::csv_io::{save_csv, schema_of};
use crate::error::{Error, Result};
use crate::export::{read_trips, write_od};

pub const SYNTH_DATA: &str = "data.csv";
pub const SYNTH_SCHEMA: &str = "schema.toml";
pub const SYNTH_TRUTH: &str = "truth.json";

/// Paths written by [`synth`].
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub data: PathBuf,
    pub schema: PathBuf,
    pub truth: PathBuf,
}

/// Reads a JSON synthetic spec.
pub fn load_synth_spec(path: &Path) -> Result<SyntheticSpec> {
    let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&text).map_err(|e| Error::format(path, e.to_string()))
}

/// Generates a dataset and writes `data.csv`, a matching `schema.toml` and
/// the ground truth as `truth.json` into `out`. The generator seed is
/// derived from `root_seed`, overriding any seed in the spec.
pub fn synth(spec: &SyntheticSpec, root_seed: u64, out: &Path) -> Result<(SynthOutput, GroundTruth)> {
    let mut spec = spec.clone();
    spec.seed = seed::derive(root_seed, seed_stage::SYNTH);
    let (data, truth) = gen_synthetic(&spec)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let paths = SynthOutput { data: out.join(SYNTH_DATA), schema: out.join(SYNTH_SCHEMA), truth: out.join(SYNTH_TRUTH) };
    save_csv(&data, &paths.data)?;
    std::fs::write(&paths.schema, schema_of(&data).to_toml()).map_err(|e| Error::io(&paths.schema, e))?;
    let json = serde_json::to_string_pretty(&truth).expect("ground truth serialises");
    std::fs::write(&paths.truth, json + "\n").map_err(|e| Error::io(&paths.truth, e))?;
    Ok((paths, truth))
}

/// Aggregates a trip CSV to OD pairs and writes the OD table. Returns the
/// number of pairs kept.
pub fn aggregate_od_file(input: &Path, out: &Path, study_days: usize, min_trips: usize) -> Result<usize> {
    let file = std::fs::File::open(input).map_err(|e| Error::io(input, e))?;
    let trips = read_trips(std::io::BufReader::new(file))?;
    let rows = aggregate_od(&trips, study_days, min_trips)?;
    let mut buf = Vec::new();
    write_od(&rows, &mut buf)?;
    std::fs::write(out, buf).map_err(|e| Error::io(out, e))?;
    Ok(rows.len())
}
