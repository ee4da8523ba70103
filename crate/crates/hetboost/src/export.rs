//! CSV and JSON writers for pipeline artifacts, plus the trip-record reader
//! used by `aggregate-od`.
//!
//! Floats are written in their shortest round-trip form so every table can
//! be re-read without loss.

use std::io::{Read, Write};

use hetboost_core::dependence::CurveSet;
use hetboost_core::prep::{OdAggregate, TripRecord};
use hetboost_core::tuning::CvResult;
use hetboost_core::vif::VifReport;
use hetboost_core::{ImportanceReport, ShapRow, TabularDataset, TrainConfig};

use crate::csv_io::csv_err;
use crate::error::{Error, Result};

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::io("<csv>", e))
}

fn num(v: f64) -> String {
    v.to_string()
}

/// Columns `base, <features...>, group`.
pub fn write_shap(rows: &[ShapRow], data: &TabularDataset, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    let mut header = vec!["base".to_string()];
    header.extend(data.feature_names().iter().map(|s| s.to_string()));
    header.push(data.group_meta().name.clone());
    w.write_record(&header).map_err(csv_err)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![num(r.base)];
        rec.extend(r.phi.iter().map(|&v| num(v)));
        rec.push(data.group_label(i).to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

/// Columns `scope, n, feature, category, mean_abs, relative`, global scope first.
pub fn write_importance_features(report: &ImportanceReport, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["scope", "n", "feature", "category", "mean_abs", "relative"]).map_err(csv_err)?;
    for s in report.scopes() {
        for (j, name) in report.features.iter().enumerate() {
            w.write_record([
                s.scope.name(),
                &s.n.to_string(),
                name,
                report.feature_categories[j].as_str(),
                &num(s.mean_abs[j]),
                &num(s.relative[j]),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Columns `scope, category, count, sum, average`.
pub fn write_importance_categories(report: &ImportanceReport, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["scope", "category", "count", "sum", "average"]).map_err(csv_err)?;
    for s in report.scopes() {
        for c in &s.categories {
            w.write_record([s.scope.name(), c.category.as_str(), &c.count.to_string(), &num(c.sum), &num(c.average)])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn write_importance_json(report: &ImportanceReport, out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, report).map_err(|e| Error::format("<json>", e.to_string()))
}

/// Long format: `feature, grid_value, scope, estimate, n_scope, low_support`.
/// The global PDP comes first, then one block per group in group order.
pub fn write_curves(sets: &[CurveSet], out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["feature", "grid_value", "scope", "estimate", "n_scope", "low_support"]).map_err(csv_err)?;
    for set in sets {
        let n_total = set.rug.global.n;
        let blocks = std::iter::once(("global", n_total, &set.global_pdp, &set.rug.global.low_support)).chain(
            set.groups.iter().map(|g| {
                let rug = set.rug.groups.iter().find(|r| r.scope == g.label).expect("rug has every group");
                (g.label.as_str(), g.n, &g.values, &rug.low_support)
            }),
        );
        for (scope, n, values, low) in blocks {
            for (t, &x) in set.grid.points.iter().enumerate() {
                w.write_record([&set.feature_name, &num(x), scope, &num(values[t]), &n.to_string(), &low[t].to_string()])
                    .map_err(csv_err)?;
            }
        }
    }
    finish(w)
}

/// Rug marks: `feature, scope, n_scope, kind, at, value`. `decile` rows give
/// the scope's 10th..90th percentiles of the feature; `support` rows give the
/// number of scope rows whose nearest grid point is `at`.
pub fn write_rug(sets: &[CurveSet], out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["feature", "scope", "n_scope", "kind", "at", "value"]).map_err(csv_err)?;
    for set in sets {
        for scope in std::iter::once(&set.rug.global).chain(&set.rug.groups) {
            let n = scope.n.to_string();
            for (d, &v) in scope.deciles.iter().enumerate() {
                let at = format!("0.{}", d + 1);
                w.write_record([&set.feature_name, &scope.scope, &n, "decile", &at, &num(v)]).map_err(csv_err)?;
            }
            for (t, &c) in scope.support.iter().enumerate() {
                w.write_record([&set.feature_name, &scope.scope, &n, "support", &num(set.grid.points[t]), &c.to_string()])
                    .map_err(csv_err)?;
            }
        }
    }
    finish(w)
}

/// Per-row curves: `feature, row, scope, grid_value, estimate`. Rows of one
/// group read as that group's CIPDP, all rows together as the ICE.
pub fn write_ice(sets: &[CurveSet], data: &TabularDataset, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["feature", "row", "scope", "grid_value", "estimate"]).map_err(csv_err)?;
    for set in sets {
        let Some(ice) = &set.ice else { continue };
        for i in 0..ice.n_rows {
            let label = &data.group_spec().labels[set.row_groups[i]];
            for (t, &x) in set.grid.points.iter().enumerate() {
                w.write_record([&set.feature_name, &i.to_string(), label, &num(x), &num(ice.get(i, t))])
                    .map_err(csv_err)?;
            }
        }
    }
    finish(w)
}

/// `n_trees, learning_rate, fold_1..fold_k, mean_rmse, selected`.
pub fn write_cv(table: &[CvResult], selected: &TrainConfig, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    let k = table.first().map_or(0, |r| r.fold_rmse.len());
    let mut header = vec!["n_trees".to_string(), "learning_rate".to_string()];
    header.extend((1..=k).map(|f| format!("fold_{f}")));
    header.extend(["mean_rmse".to_string(), "selected".to_string()]);
    w.write_record(&header).map_err(csv_err)?;
    let mut marked = false;
    for r in table {
        let sel = !marked && r.config.n_trees == selected.n_trees && r.config.learning_rate == selected.learning_rate;
        marked |= sel;
        let mut rec = vec![r.config.n_trees.to_string(), num(r.config.learning_rate)];
        rec.extend(r.fold_rmse.iter().map(|&v| num(v)));
        rec.extend([num(r.mean_rmse), sel.to_string()]);
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

/// `step, feature, vif, action`: removals in the order they happened, with
/// the VIF that triggered them, then survivors with their final VIF.
pub fn write_vif(report: &VifReport, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["step", "feature", "vif", "action"]).map_err(csv_err)?;
    for (i, (name, v)) in report.removed.iter().enumerate() {
        w.write_record([&(i + 1).to_string(), name, &num(*v), "removed"]).map_err(csv_err)?;
    }
    for (name, v) in &report.retained {
        w.write_record(["", name, &num(*v), "retained"]).map_err(csv_err)?;
    }
    finish(w)
}

pub const OD_COLUMNS: [&str; 9] = [
    "origin",
    "destination",
    "trips_per_day",
    "fare_median",
    "fare_sd",
    "dist_median",
    "dist_sd",
    "dur_median",
    "dur_sd",
];

pub fn write_od(rows: &[OdAggregate], out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(OD_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.origin.clone(),
            r.destination.clone(),
            num(r.trips_per_day),
            num(r.fare_median),
            num(r.fare_sd),
            num(r.dist_median),
            num(r.dist_sd),
            num(r.dur_median),
            num(r.dur_sd),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// Reads trips with header `origin_id, destination_id, fare, distance,
/// duration, day_index` (any column order, extra columns ignored).
pub fn read_trips(input: impl Read) -> Result<Vec<TripRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| Error::Schema(format!("cannot read header: {e}")))?.clone();
    let cols = ["origin_id", "destination_id", "fare", "distance", "duration", "day_index"];
    let mut pos = [0usize; 6];
    for (k, name) in cols.iter().enumerate() {
        pos[k] = header
            .iter()
            .position(|h| h == *name)
            .ok_or_else(|| Error::Schema(format!("missing column `{name}`")))?;
    }
    let mut trips = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| Error::Parse { row, column: String::new(), message: e.to_string() })?;
        let cell = |k: usize| rec.get(pos[k]).unwrap_or("").trim();
        let parse_err = |k: usize| Error::Parse {
            row,
            column: cols[k].to_string(),
            message: format!("`{}` is not a valid value", cell(k)),
        };
        let float = |k: usize| -> Result<f64> {
            cell(k).parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| parse_err(k))
        };
        trips.push(TripRecord {
            origin_id: cell(0).to_string(),
            destination_id: cell(1).to_string(),
            fare: float(2)?,
            distance: float(3)?,
            duration: float(4)?,
            day_index: cell(5).parse().map_err(|_| parse_err(5))?,
        });
    }
    Ok(trips)
}
