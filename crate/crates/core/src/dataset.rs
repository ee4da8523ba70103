//! The tabular data model: predictor matrix, target, group labels and
//! per-column metadata.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Role {
    Predictor,
    Target,
    GroupLabel,
    Excluded,
}

/// Variable families used when aggregating importance by category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Category {
    TravelImpedance,
    SocioeconomicDemographic,
    BuiltEnvLanduse,
    BuiltEnvTransit,
    #[default]
    Other,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::TravelImpedance,
        Category::SocioeconomicDemographic,
        Category::BuiltEnvLanduse,
        Category::BuiltEnvTransit,
        Category::Other,
    ];

    /// Identifier used in schema files and exports.
    pub fn as_str(self) -> &'static str {
        match self {
            Category::TravelImpedance => "travel_impedance",
            Category::SocioeconomicDemographic => "socioeconomic_demographic",
            Category::BuiltEnvLanduse => "built_env_landuse",
            Category::BuiltEnvTransit => "built_env_transit",
            Category::Other => "other",
        }
    }

    /// Human-readable heading for report tables.
    pub fn title(self) -> &'static str {
        match self {
            Category::TravelImpedance => "Travel Impedance",
            Category::SocioeconomicDemographic => "Socio-Economic and Demographic",
            Category::BuiltEnvLanduse => "Built Environment: Land Use and Accessibility",
            Category::BuiltEnvTransit => "Built Environment: Transit Supply",
            Category::Other => "Other",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown category `{s}`")))
    }
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Predictor => "predictor",
            Role::Target => "target",
            Role::GroupLabel => "group_label",
            Role::Excluded => "excluded",
        }
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "predictor" => Ok(Role::Predictor),
            "target" => Ok(Role::Target),
            "group_label" | "group" => Ok(Role::GroupLabel),
            "excluded" => Ok(Role::Excluded),
            _ => Err(Error::Schema(format!("unknown role `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureMeta {
    pub name: String,
    pub role: Role,
    #[cfg_attr(feature = "serde", serde(default))]
    pub category: Category,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
    pub units: String,
}

impl FeatureMeta {
    pub fn new(name: impl Into<String>, role: Role, category: Category) -> Self {
        FeatureMeta {
            name: name.into(),
            role,
            category,
            units: String::new(),
        }
    }

    pub fn predictor(name: impl Into<String>, category: Category) -> Self {
        Self::new(name, Role::Predictor, category)
    }
}

/// Ordered group labels and their row counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
}

impl GroupSpec {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Builds a spec by counting `ids` against `labels`.
    pub fn from_ids(labels: Vec<String>, ids: &[usize]) -> Result<Self> {
        let mut counts = alloc::vec![0usize; labels.len()];
        for (row, &g) in ids.iter().enumerate() {
            *counts
                .get_mut(g)
                .ok_or_else(|| Error::Label(format!("row {row}: group id {g} out of range")))? += 1;
        }
        Ok(GroupSpec { labels, counts })
    }
}

/// Immutable, validated regression dataset.
///
/// Predictors are stored row-major. Group ids index into [`GroupSpec::labels`].
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    predictors: Vec<FeatureMeta>,
    target_meta: FeatureMeta,
    group_meta: FeatureMeta,
    x: Vec<f64>,
    target: Vec<f64>,
    groups: Vec<usize>,
    group_spec: GroupSpec,
}

impl TabularDataset {
    /// Validates and assembles a dataset.
    ///
    /// `x` is row-major with one column per entry of `predictors`.
    pub fn new(
        predictors: Vec<FeatureMeta>,
        x: Vec<f64>,
        target_meta: FeatureMeta,
        target: Vec<f64>,
        group_meta: FeatureMeta,
        group_labels: Vec<String>,
        groups: Vec<usize>,
    ) -> Result<Self> {
        let n = target.len();
        let m = predictors.len();
        if predictors.iter().any(|p| p.role != Role::Predictor) {
            return Err(Error::Schema("predictor columns must have role predictor".into()));
        }
        if target_meta.role != Role::Target {
            return Err(Error::Schema("target column must have role target".into()));
        }
        if group_meta.role != Role::GroupLabel {
            return Err(Error::Schema("group column must have role group_label".into()));
        }
        let mut names = BTreeSet::new();
        for meta in predictors.iter().chain([&target_meta, &group_meta]) {
            if !names.insert(meta.name.as_str()) {
                return Err(Error::Schema(format!("duplicate column name `{}`", meta.name)));
            }
        }
        if x.len() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                got: x.len(),
            });
        }
        if groups.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: groups.len(),
            });
        }
        if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / m,
                column: predictors[pos % m].name.clone(),
            });
        }
        if let Some(row) = target.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row,
                column: target_meta.name.clone(),
            });
        }
        if group_labels.is_empty() {
            return Err(Error::Label("at least one group label is required".into()));
        }
        let distinct: BTreeSet<&str> = group_labels.iter().map(String::as_str).collect();
        if distinct.len() != group_labels.len() {
            return Err(Error::Label("group labels must be distinct".into()));
        }
        let group_spec = GroupSpec::from_ids(group_labels, &groups)?;
        if let Some(g) = group_spec.counts.iter().position(|&c| c == 0) {
            return Err(Error::Label(format!(
                "group `{}` has no rows",
                group_spec.labels[g]
            )));
        }
        Ok(TabularDataset {
            predictors,
            target_meta,
            group_meta,
            x,
            target,
            groups,
            group_spec,
        })
    }

    /// Dataset with generated names `x0..`, target `y` and group column `group`.
    pub fn unnamed(
        n_features: usize,
        x: Vec<f64>,
        target: Vec<f64>,
        groups: Vec<usize>,
        group_labels: Vec<String>,
    ) -> Result<Self> {
        let predictors = (0..n_features)
            .map(|j| FeatureMeta::predictor(format!("x{j}"), Category::Other))
            .collect();
        Self::new(
            predictors,
            x,
            FeatureMeta::new("y", Role::Target, Category::Other),
            target,
            FeatureMeta::new("group", Role::GroupLabel, Category::Other),
            group_labels,
            groups,
        )
    }

    /// Single-group convenience constructor.
    pub fn ungrouped(n_features: usize, x: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        let n = target.len();
        Self::unnamed(n_features, x, target, alloc::vec![0; n], alloc::vec!["all".to_string()])
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.predictors.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.n_features();
        &self.x[i * m..(i + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        // `max(1)` keeps chunks_exact valid for a zero-predictor dataset
        self.x.chunks_exact(self.n_features().max(1))
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.x[row * self.n_features() + feature]
    }

    pub fn column(&self, feature: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|i| self.value(i, feature)).collect()
    }

    /// Row-major predictor matrix.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn group_spec(&self) -> &GroupSpec {
        &self.group_spec
    }

    pub fn group_label(&self, row: usize) -> &str {
        &self.group_spec.labels[self.groups[row]]
    }

    pub fn features(&self) -> &[FeatureMeta] {
        &self.predictors
    }

    pub fn target_meta(&self) -> &FeatureMeta {
        &self.target_meta
    }

    pub fn group_meta(&self) -> &FeatureMeta {
        &self.group_meta
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.predictors.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.predictors.iter().position(|p| p.name == name)
    }

    /// Schema describing this dataset's columns: predictors, target, group.
    pub fn meta(&self) -> Vec<FeatureMeta> {
        let mut all = self.predictors.clone();
        all.push(self.target_meta.clone());
        all.push(self.group_meta.clone());
        all
    }

    /// Keeps only the listed predictor columns, in the given order.
    pub fn select_features(&self, keep: &[usize]) -> Result<Self> {
        let m = self.n_features();
        if let Some(&bad) = keep.iter().find(|&&j| j >= m) {
            return Err(Error::arg(format!("feature index {bad} out of range")));
        }
        let x = self
            .rows()
            .take(self.n_rows())
            .flat_map(|row| keep.iter().map(move |&j| row[j]))
            .collect();
        Self::new(
            keep.iter().map(|&j| self.predictors[j].clone()).collect(),
            x,
            self.target_meta.clone(),
            self.target.clone(),
            self.group_meta.clone(),
            self.group_spec.labels.clone(),
            self.groups.clone(),
        )
    }

    /// Row subset in the given order. Groups left without rows are dropped
    /// and the remaining ids renumbered.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        let n = self.n_rows();
        if let Some(&bad) = rows.iter().find(|&&i| i >= n) {
            return Err(Error::arg(format!("row index {bad} out of range")));
        }
        let mut present = alloc::vec![false; self.group_spec.len()];
        for &i in rows {
            present[self.groups[i]] = true;
        }
        let mut remap = alloc::vec![usize::MAX; present.len()];
        let mut labels = Vec::new();
        for (g, _) in present.iter().enumerate().filter(|(_, &p)| p) {
            remap[g] = labels.len();
            labels.push(self.group_spec.labels[g].clone());
        }
        Self::new(
            self.predictors.clone(),
            rows.iter().flat_map(|&i| self.row(i).iter().copied()).collect(),
            self.target_meta.clone(),
            rows.iter().map(|&i| self.target[i]).collect(),
            self.group_meta.clone(),
            labels,
            rows.iter().map(|&i| remap[self.groups[i]]).collect(),
        )
    }
}
