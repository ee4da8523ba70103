//! Human-readable summaries of a finished run.
//!
//! Everything rendered here is read back from the exported CSVs, after the
//! manifest hashes have been checked, so the text can always be re-derived
//! from the artifacts alone.

use std::fmt::Write as _;
use std::path::Path;

use hetboost_core::shap::CategoryImportance;
use hetboost_core::{Category, ImportanceReport};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::manifest::Manifest;
use crate::pipeline::artifact;

/// Formats a percentage with two decimals, rounding half away from zero.
///
/// Values are first snapped to a millionth of the last displayed digit so
/// that binary representation error cannot decide a tie: `18.97 / 2` is
/// stored as `9.4849999...` and still shows as `9.49`.
pub fn fmt_share(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let scaled = (v * 100.0 * 1e6).round() / 1e6;
    let cents = scaled.round();
    let s = format!("{:.2}", cents / 100.0);
    if s == "-0.00" { "0.00".into() } else { s }
}

#[derive(Debug, Deserialize)]
struct FeatureRecord {
    scope: String,
    n: usize,
    feature: String,
    category: Category,
    #[allow(dead_code)]
    mean_abs: f64,
    relative: f64,
}

#[derive(Debug, Deserialize)]
struct CategoryRecord {
    scope: String,
    category: Category,
    count: usize,
    sum: f64,
    average: f64,
}

/// Per-scope importance as read from the exported tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ScopeSummary {
    pub scope: String,
    pub n: usize,
    /// `(feature, category, relative importance in percent)` in feature order.
    pub features: Vec<(String, Category, f64)>,
    pub categories: Vec<CategoryImportance>,
}

impl ScopeSummary {
    /// Features by decreasing importance; ties keep feature order.
    pub fn top(&self, k: usize) -> Vec<&(String, Category, f64)> {
        let mut order: Vec<&(String, Category, f64)> = self.features.iter().collect();
        order.sort_by(|a, b| b.2.total_cmp(&a.2));
        order.truncate(k);
        order
    }
}

fn read_table<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    rdr.deserialize().collect::<std::result::Result<Vec<T>, _>>().map_err(|e| Error::format(path, e.to_string()))
}

/// Reads `importance_features.csv` and `importance_categories.csv`, scopes in
/// file order (global first).
pub fn read_importance(dir: &Path) -> Result<Vec<ScopeSummary>> {
    let feats: Vec<FeatureRecord> = read_table(&dir.join(artifact::IMPORTANCE_FEATURES))?;
    let cats: Vec<CategoryRecord> = read_table(&dir.join(artifact::IMPORTANCE_CATEGORIES))?;
    let mut scopes: Vec<ScopeSummary> = Vec::new();
    for r in feats {
        match scopes.last_mut() {
            Some(s) if s.scope == r.scope => s.features.push((r.feature, r.category, r.relative)),
            _ => scopes.push(ScopeSummary {
                scope: r.scope,
                n: r.n,
                features: vec![(r.feature, r.category, r.relative)],
                categories: Vec::new(),
            }),
        }
    }
    for r in cats {
        let scope = scopes
            .iter_mut()
            .find(|s| s.scope == r.scope)
            .ok_or_else(|| Error::Integrity(format!("category table names unknown scope `{}`", r.scope)))?;
        scope.categories.push(CategoryImportance { category: r.category, count: r.count, sum: r.sum, average: r.average });
    }
    Ok(scopes)
}

/// Checks that each category average is its sum over its count.
pub fn check_categories(scope: &str, cats: &[CategoryImportance]) -> Result<()> {
    for c in cats {
        if !c.is_consistent() {
            return Err(Error::Integrity(format!(
                "scope `{scope}`: category `{}` average {} is not sum {} / count {}",
                c.category.as_str(),
                c.average,
                c.sum,
                c.count
            )));
        }
    }
    Ok(())
}

/// The category table: one row per category with its variable count, then
/// the importance sum for every scope, then the average for every scope.
/// Averages are checked against sums and counts before anything is drawn.
pub fn render_category_table(scopes: &[(String, Vec<CategoryImportance>)]) -> Result<String> {
    for (scope, cats) in scopes {
        check_categories(scope, cats)?;
    }
    let mut rows: Vec<Category> = Vec::new();
    for (_, cats) in scopes {
        for c in cats {
            if !rows.contains(&c.category) {
                rows.push(c.category);
            }
        }
    }
    rows.sort();
    let mut out = String::new();
    let mut header = String::from("| Variable Category | Variable Count |");
    let mut rule = String::from("|---|---:|");
    for prefix in ["Importance Sum", "Importance Avg."] {
        for (scope, _) in scopes {
            let _ = write!(header, " {prefix}: {scope} |");
            rule.push_str("---:|");
        }
    }
    let _ = writeln!(out, "{header}\n{rule}");
    for cat in rows {
        let cells: Vec<Option<&CategoryImportance>> =
            scopes.iter().map(|(_, cats)| cats.iter().find(|c| c.category == cat)).collect();
        let count = cells.iter().flatten().map(|c| c.count).next().unwrap_or(0);
        if cells.iter().flatten().any(|c| c.count != count) {
            return Err(Error::Integrity(format!("category `{}` has different counts across scopes", cat.as_str())));
        }
        let _ = write!(out, "| {} | {count} |", cat.title());
        for pick in [|c: &CategoryImportance| c.sum, |c: &CategoryImportance| c.average] {
            for cell in &cells {
                match cell {
                    Some(c) => {
                        let _ = write!(out, " {} |", fmt_share(pick(c)));
                    }
                    None => out.push_str(" - |"),
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Top-`k` feature table for one scope; `k` larger than the feature count
/// shows every feature.
pub fn render_top_features(scope: &ScopeSummary, k: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| Rank | Variable | Category | Relative Importance (%) |\n|---:|---|---|---:|");
    for (rank, (name, cat, rel)) in scope.top(k).into_iter().enumerate() {
        let _ = writeln!(out, "| {} | {name} | {} | {} |", rank + 1, cat.title(), fmt_share(*rel));
    }
    out
}

/// Full report for an artifacts directory. Fails with an integrity error if
/// any artifact differs from its manifest hash.
pub fn render_report(dir: &Path, top_k: usize) -> Result<String> {
    let manifest = Manifest::load(dir)?;
    manifest.verify(dir)?;
    let json_path = dir.join(artifact::IMPORTANCE_JSON);
    let json = std::fs::read(&json_path).map_err(|e| Error::io(&json_path, e))?;
    let structured: ImportanceReport =
        serde_json::from_slice(&json).map_err(|e| Error::format(&json_path, e.to_string()))?;
    let scopes = read_importance(dir)?;
    for s in &scopes {
        let total: f64 = s.features.iter().map(|f| f.2).sum();
        if (total - 100.0).abs() > 1e-6 {
            return Err(Error::Integrity(format!("scope `{}` importance sums to {total}, not 100", s.scope)));
        }
    }

    let m = &manifest.model;
    let mut out = String::new();
    let _ = writeln!(out, "# Importance report\n");
    let _ = writeln!(
        out,
        "Model: {} trees, learning rate {}, max depth {}{}; {} rows, {} predictors, {} groups.\n",
        m.n_trees,
        m.learning_rate,
        m.max_depth,
        if m.from_cv { " (selected by cross-validation)" } else { "" },
        m.n_rows,
        m.features.len(),
        m.groups.len()
    );
    for label in &structured.omitted_groups {
        let _ = writeln!(out, "Note: group `{label}` has no rows and is omitted.\n");
    }

    let _ = writeln!(out, "## Relative importance by category (%)\n");
    let table: Vec<(String, Vec<CategoryImportance>)> =
        scopes.iter().map(|s| (s.scope.clone(), s.categories.clone())).collect();
    out.push_str(&render_category_table(&table)?);

    for s in &scopes {
        let k = top_k.min(s.features.len());
        let _ = writeln!(out, "\n## Top {k} variables: {} (n = {})\n", s.scope, s.n);
        out.push_str(&render_top_features(s, top_k));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn share_rounding() {
        assert_eq!(fmt_share(18.97 / 2.0), "9.49");
        assert_eq!(fmt_share(13.71 / 2.0), "6.86");
        assert_eq!(fmt_share(40.39 / 12.0), "3.37");
        assert_eq!(fmt_share(50.35 / 16.0), "3.15");
        assert_eq!(fmt_share(0.004), "0.00");
        assert_eq!(fmt_share(-0.004), "0.00");
        assert_eq!(fmt_share(100.0), "100.00");
    }

    #[test]
    fn category_table_layout() {
        let cats = vec![
            CategoryImportance::new(Category::TravelImpedance, 2, 18.97).unwrap(),
            CategoryImportance::new(Category::Other, 1, 81.03).unwrap(),
        ];
        let t = render_category_table(&[("neighborhood".into(), cats)]).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "| Variable Category | Variable Count | Importance Sum: neighborhood | Importance Avg.: neighborhood |");
        assert_eq!(lines[2], "| Travel Impedance | 2 | 18.97 | 9.49 |");
    }

    #[test]
    fn inconsistent_average_is_refused() {
        let bad = CategoryImportance { category: Category::Other, count: 2, sum: 10.0, average: 4.0 };
        assert!(matches!(render_category_table(&[("g".into(), vec![bad])]), Err(Error::Integrity(_))));
    }

    #[test]
    fn top_k_caps_at_feature_count() {
        let s = ScopeSummary {
            scope: "global".into(),
            n: 3,
            features: vec![("a".into(), Category::Other, 30.0), ("b".into(), Category::Other, 70.0)],
            categories: vec![],
        };
        let t = render_top_features(&s, 10);
        assert_eq!(t.lines().count(), 4);
        assert!(t.lines().nth(2).unwrap().contains("| 1 | b |"));
    }
}
