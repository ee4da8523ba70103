//! Partial dependence (PDP), individual conditional expectation (ICE) and
//! their group-conditional versions (CPDP, CIPDP).
//!
//! ICE rows are the single evaluation path: the PDP is the column mean of
//! all ICE rows and each group's CPDP is the column mean of that group's
//! rows (its CIPDP curves). Groups share one grid so their curves overlay.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::dataset::{GroupSpec, TabularDataset};
use crate::error::{Error, Result};
use crate::gbt::Ensemble;
use crate::stats::{deciles, quantile_sorted, sorted_copy};

pub const DEFAULT_GRID_POINTS: usize = 50;
/// A grid point is low-support when its cell holds fewer than this share of a scope's rows.
pub const LOW_SUPPORT_SHARE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GridStrategy {
    #[default]
    Quantile,
    Uniform,
}

impl GridStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            GridStrategy::Quantile => "quantile",
            GridStrategy::Uniform => "uniform",
        }
    }
}

impl FromStr for GridStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantile" => Ok(GridStrategy::Quantile),
            "uniform" => Ok(GridStrategy::Uniform),
            _ => Err(Error::arg(format!("unknown grid strategy `{s}`"))),
        }
    }
}

/// Strictly increasing evaluation points for one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub feature: usize,
    pub points: Vec<f64>,
    pub strategy: GridStrategy,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the grid point nearest to `v`; exact ties go to the lower point.
    pub fn nearest(&self, v: f64) -> usize {
        let p = &self.points;
        let k = p.partition_point(|&g| g < v);
        if k == 0 {
            0
        } else if k == p.len() {
            p.len() - 1
        } else if v - p[k - 1] <= p[k] - v {
            k - 1
        } else {
            k
        }
    }
}

/// Quantile grids take empirical quantiles at `k / (count - 1)` and drop
/// repeats; uniform grids space `count` points evenly over `[min, max]`.
pub fn make_grid(data: &TabularDataset, feature: usize, strategy: GridStrategy, count: usize) -> Result<Grid> {
    if count < 2 {
        return Err(Error::arg("a grid needs at least two points"));
    }
    if feature >= data.n_features() {
        return Err(Error::arg(format!("feature index {feature} out of range")));
    }
    let sorted = sorted_copy(&data.column(feature));
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if !(lo < hi) {
        return Err(Error::DegenerateGrid { feature: data.features()[feature].name.clone() });
    }
    let step = |k: usize| k as f64 / (count - 1) as f64;
    let mut points: Vec<f64> = match strategy {
        GridStrategy::Quantile => (0..count).map(|k| quantile_sorted(&sorted, step(k))).collect(),
        GridStrategy::Uniform => (0..count)
            .map(|k| if k + 1 == count { hi } else { lo + (hi - lo) * step(k) })
            .collect(),
    };
    points.dedup();
    Ok(Grid { feature, points, strategy })
}

/// Row-major `n × |grid|` matrix of ICE values.
#[derive(Debug, Clone, PartialEq)]
pub struct IceMatrix {
    pub n_rows: usize,
    pub n_points: usize,
    pub values: Vec<f64>,
}

impl IceMatrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_points..(i + 1) * self.n_points]
    }

    pub fn get(&self, i: usize, t: usize) -> f64 {
        self.values[i * self.n_points + t]
    }
}

/// Predictions with `feature` overwritten by each of `points`, other columns untouched.
pub fn ice_at(model: &Ensemble, data: &TabularDataset, feature: usize, points: &[f64]) -> Result<IceMatrix> {
    if data.n_features() != model.n_features() {
        return Err(Error::DimensionMismatch { expected: model.n_features(), got: data.n_features() });
    }
    if feature >= data.n_features() {
        return Err(Error::arg(format!("feature index {feature} out of range")));
    }
    let mut values = Vec::with_capacity(data.n_rows() * points.len());
    let mut z = alloc::vec![0.0; data.n_features()];
    for row in data.rows().take(data.n_rows()) {
        z.copy_from_slice(row);
        for &p in points {
            z[feature] = p;
            values.push(model.predict_unchecked(&z));
        }
    }
    Ok(IceMatrix { n_rows: data.n_rows(), n_points: points.len(), values })
}

pub fn ice(model: &Ensemble, data: &TabularDataset, grid: &Grid) -> Result<IceMatrix> {
    ice_at(model, data, grid.feature, &grid.points)
}

fn column_means(ice: &IceMatrix, rows: impl Iterator<Item = usize> + Clone, n: usize) -> Vec<f64> {
    (0..ice.n_points)
        .map(|t| rows.clone().map(|i| ice.get(i, t)).sum::<f64>() / n as f64)
        .collect()
}

/// Column means of the ICE matrix, summed in row order.
pub fn pdp(ice: &IceMatrix) -> Result<Vec<f64>> {
    if ice.n_rows == 0 {
        return Err(Error::arg("ICE matrix has no rows"));
    }
    Ok(column_means(ice, 0..ice.n_rows, ice.n_rows))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCurve {
    pub group: usize,
    pub label: String,
    pub n: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cpdp {
    pub curves: Vec<GroupCurve>,
    /// Labels with no rows; they get no curve.
    pub empty_groups: Vec<String>,
}

/// Per-group column means over each group's ICE (CIPDP) rows.
pub fn cpdp(ice: &IceMatrix, groups: &[usize], spec: &GroupSpec) -> Result<Cpdp> {
    if groups.len() != ice.n_rows {
        return Err(Error::DimensionMismatch { expected: ice.n_rows, got: groups.len() });
    }
    if let Some(&g) = groups.iter().find(|&&g| g >= spec.len()) {
        return Err(Error::Label(format!("group id {g} has no label")));
    }
    let mut curves = Vec::new();
    let mut empty_groups = Vec::new();
    for (g, label) in spec.labels.iter().enumerate() {
        let rows = (0..ice.n_rows).filter(move |&i| groups[i] == g);
        let n = rows.clone().count();
        if n == 0 {
            empty_groups.push(label.clone());
            continue;
        }
        curves.push(GroupCurve { group: g, label: label.clone(), n, values: column_means(ice, rows, n) });
    }
    Ok(Cpdp { curves, empty_groups })
}

/// Data density of one scope along a feature.
#[derive(Debug, Clone, PartialEq)]
pub struct RugScope {
    /// `"global"` or a group label.
    pub scope: String,
    pub n: usize,
    /// 10%, 20%, ..., 90% empirical quantiles.
    pub deciles: Vec<f64>,
    /// Rows whose nearest grid point is each grid point.
    pub support: Vec<usize>,
    pub low_support: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rug {
    pub global: RugScope,
    pub groups: Vec<RugScope>,
}

fn rug_scope(scope: String, values: &[f64], grid: &Grid) -> RugScope {
    let mut support = alloc::vec![0usize; grid.len()];
    for &v in values {
        support[grid.nearest(v)] += 1;
    }
    let cutoff = LOW_SUPPORT_SHARE * values.len() as f64;
    RugScope {
        scope,
        n: values.len(),
        deciles: deciles(values),
        low_support: support.iter().map(|&c| (c as f64) < cutoff).collect(),
        support,
    }
}

/// Deciles and per-grid-point support, globally and for each nonempty group.
pub fn rug(data: &TabularDataset, grid: &Grid) -> Result<Rug> {
    if grid.feature >= data.n_features() {
        return Err(Error::arg(format!("feature index {} out of range", grid.feature)));
    }
    let col = data.column(grid.feature);
    let global = rug_scope("global".into(), &col, grid);
    let groups = data
        .group_spec()
        .labels
        .iter()
        .enumerate()
        .filter_map(|(g, label)| {
            let vals: Vec<f64> = col.iter().zip(data.groups()).filter(|(_, &gi)| gi == g).map(|(v, _)| *v).collect();
            (!vals.is_empty()).then(|| rug_scope(label.clone(), &vals, grid))
        })
        .collect();
    Ok(Rug { global, groups })
}

/// Everything needed to draw the global and conditional curves of one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub feature_name: String,
    pub grid: Grid,
    pub global_pdp: Vec<f64>,
    pub groups: Vec<GroupCurve>,
    pub ice: Option<IceMatrix>,
    /// Row index → group id for the rows of `ice`.
    pub row_groups: Vec<usize>,
    pub rug: Rug,
}

pub fn curve_set(
    model: &Ensemble,
    data: &TabularDataset,
    feature: usize,
    strategy: GridStrategy,
    count: usize,
    keep_ice: bool,
) -> Result<CurveSet> {
    let grid = make_grid(data, feature, strategy, count)?;
    let matrix = ice(model, data, &grid)?;
    let global_pdp = pdp(&matrix)?;
    let conditional = cpdp(&matrix, data.groups(), data.group_spec())?;
    let rug = rug(data, &grid)?;
    Ok(CurveSet {
        feature_name: data.features()[feature].name.clone(),
        grid,
        global_pdp,
        groups: conditional.curves,
        ice: keep_ice.then_some(matrix),
        row_groups: data.groups().to_vec(),
        rug,
    })
}
