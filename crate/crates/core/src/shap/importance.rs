use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ShapRow;
use crate::dataset::{Category, FeatureMeta, GroupSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "label", rename_all = "snake_case"))]
pub enum Scope {
    Global,
    Group(String),
}

impl Scope {
    pub fn name(&self) -> &str {
        match self {
            Scope::Global => "global",
            Scope::Group(label) => label,
        }
    }
}

/// Importance summed and averaged over the features of one category.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoryImportance {
    pub category: Category,
    pub count: usize,
    /// Sum of member `relative` percentages.
    pub sum: f64,
    /// `sum / count`.
    pub average: f64,
}

impl CategoryImportance {
    pub fn new(category: Category, count: usize, sum: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::arg(format!("category `{category}` has no member features")));
        }
        Ok(CategoryImportance { category, count, sum, average: sum / count as f64 })
    }

    /// Whether `average` is exactly `sum / count`.
    pub fn is_consistent(&self) -> bool {
        self.count > 0 && self.average == self.sum / self.count as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScopeImportance {
    pub scope: Scope,
    pub n: usize,
    /// Mean absolute attribution per feature.
    pub mean_abs: Vec<f64>,
    /// `100 · mean_abs / Σ mean_abs`, in percent.
    pub relative: Vec<f64>,
    pub categories: Vec<CategoryImportance>,
}

impl ScopeImportance {
    /// Feature indices ordered by decreasing importance, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.relative.len()).collect();
        idx.sort_by(|&a, &b| self.relative[b].total_cmp(&self.relative[a]).then(a.cmp(&b)));
        idx
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImportanceReport {
    pub features: Vec<String>,
    pub feature_categories: Vec<Category>,
    pub global: ScopeImportance,
    pub groups: Vec<ScopeImportance>,
    /// Group labels with no rows, left out of `groups`.
    pub omitted_groups: Vec<String>,
}

impl ImportanceReport {
    pub fn group(&self, label: &str) -> Option<&ScopeImportance> {
        self.groups.iter().find(|s| s.scope.name() == label)
    }

    pub fn scopes(&self) -> impl Iterator<Item = &ScopeImportance> {
        core::iter::once(&self.global).chain(&self.groups)
    }
}

/// Global and per-group importance from a matrix of attributions.
///
/// `groups[i]` indexes `spec.labels` for row `i`; `features` supplies the
/// names and categories of the attribution columns.
pub fn importance(
    shap: &[ShapRow],
    groups: &[usize],
    spec: &GroupSpec,
    features: &[FeatureMeta],
) -> Result<ImportanceReport> {
    let m = features.len();
    if groups.len() != shap.len() {
        return Err(Error::DimensionMismatch { expected: shap.len(), got: groups.len() });
    }
    if let Some(row) = shap.iter().find(|r| r.phi.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: row.phi.len() });
    }
    if let Some(&g) = groups.iter().find(|&&g| g >= spec.len()) {
        return Err(Error::Label(format!("group id {g} has no label")));
    }
    if shap.is_empty() {
        return Err(Error::arg("no attributions to aggregate"));
    }
    let categories: Vec<Category> = features.iter().map(|f| f.category).collect();

    let all: Vec<usize> = (0..shap.len()).collect();
    let global = scope_importance(Scope::Global, shap, &all, &categories)?;
    let mut per_group = Vec::new();
    let mut omitted = Vec::new();
    for (g, label) in spec.labels.iter().enumerate() {
        let rows: Vec<usize> = (0..shap.len()).filter(|&i| groups[i] == g).collect();
        if rows.is_empty() {
            omitted.push(label.clone());
            continue;
        }
        per_group.push(scope_importance(Scope::Group(label.clone()), shap, &rows, &categories)?);
    }
    Ok(ImportanceReport {
        features: features.iter().map(|f| f.name.clone()).collect(),
        feature_categories: categories,
        global,
        groups: per_group,
        omitted_groups: omitted,
    })
}

fn scope_importance(scope: Scope, shap: &[ShapRow], rows: &[usize], categories: &[Category]) -> Result<ScopeImportance> {
    let m = categories.len();
    let mut sums = vec![0.0f64; m];
    for &i in rows {
        for (s, p) in sums.iter_mut().zip(&shap[i].phi) {
            *s += libm::fabs(*p);
        }
    }
    let n = rows.len() as f64;
    let mean_abs: Vec<f64> = sums.into_iter().map(|s| s / n).collect();
    let total: f64 = mean_abs.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Normalization { scope: scope.name().into() });
    }
    let relative: Vec<f64> = mean_abs.iter().map(|p| 100.0 * p / total).collect();
    let categories = Category::ALL
        .into_iter()
        .filter_map(|c| {
            let members: Vec<usize> = (0..m).filter(|&j| categories[j] == c).collect();
            if members.is_empty() {
                return None;
            }
            let sum = members.iter().map(|&j| relative[j]).sum();
            Some(CategoryImportance::new(c, members.len(), sum))
        })
        .collect::<Result<_>>()?;
    Ok(ScopeImportance { scope, n: rows.len(), mean_abs, relative, categories })
}
