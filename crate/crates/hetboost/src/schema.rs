//! Column schema files.
//!
//! A schema is TOML. Each `[[column]]` table names one CSV column and gives
//! its `role` (`predictor`, `target`, `group_label` or `excluded`), and
//! optionally a `category` (`travel_impedance`, `socioeconomic_demographic`,
//! `built_env_landuse`, `built_env_transit`, `other`; default `other`) and
//! free-text `units`. Predictors keep the order they are declared in.
//!
//! An optional top-level `group_labels` array fixes the admissible group
//! labels and their order; without it labels are ordered by first
//! appearance in the data.
//!
//! ```toml
//! group_labels = ["airport", "downtown", "neighborhood"]
//!
//! [[column]]
//! name = "fare_median"
//! role = "predictor"
//! category = "travel_impedance"
//! units = "USD"
//!
//! [[column]]
//! name = "trips_per_day"
//! role = "target"
//!
//! [[column]]
//! name = "context"
//! role = "group_label"
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use hetboost_core::{FeatureMeta, Role};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_labels: Option<Vec<String>>,
    #[serde(rename = "column")]
    pub columns: Vec<FeatureMeta>,
}

impl Schema {
    pub fn new(columns: Vec<FeatureMeta>) -> Self {
        Schema { group_labels: None, columns }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let schema: Schema = toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("schema serialises")
    }

    /// Names are unique and exactly one target is declared. The group column
    /// is checked when a dataset is loaded, since it can be chosen at run time.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::Schema(format!("column `{}` declared twice", c.name)));
            }
        }
        let targets = self.columns.iter().filter(|c| c.role == Role::Target).count();
        if targets != 1 {
            return Err(Error::Schema(format!("expected exactly one target column, found {targets}")));
        }
        if self.columns.iter().filter(|c| c.role == Role::GroupLabel).count() > 1 {
            return Err(Error::Schema("more than one group_label column".into()));
        }
        if let Some(labels) = &self.group_labels {
            let distinct: BTreeSet<&String> = labels.iter().collect();
            if labels.is_empty() || distinct.len() != labels.len() {
                return Err(Error::Schema("group_labels must be a nonempty list of distinct labels".into()));
            }
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&FeatureMeta> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Makes `column` the group column and demotes any other group column
    /// to `excluded`.
    pub fn with_group_column(mut self, column: &str) -> Result<Self> {
        if self.column(column).is_none() {
            return Err(Error::Label(format!("group column `{column}` is not in the schema")));
        }
        for c in &mut self.columns {
            if c.name == column {
                if c.role == Role::Target {
                    return Err(Error::Label(format!("`{column}` is the target and cannot be the group column")));
                }
                c.role = Role::GroupLabel;
            } else if c.role == Role::GroupLabel {
                c.role = Role::Excluded;
            }
        }
        Ok(self)
    }

    pub fn group_column(&self) -> Result<&FeatureMeta> {
        self.columns
            .iter()
            .find(|c| c.role == Role::GroupLabel)
            .ok_or_else(|| Error::Label("schema declares no group_label column".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hetboost_core::Category;

    const TEXT: &str = r#"
group_labels = ["airport", "downtown"]

[[column]]
name = "fare"
role = "predictor"
category = "travel_impedance"
units = "USD"

[[column]]
name = "y"
role = "target"

[[column]]
name = "ctx"
role = "group_label"
"#;

    #[test]
    fn parses_documented_grammar() {
        let s = Schema::parse(TEXT).unwrap();
        assert_eq!(s.columns.len(), 3);
        assert_eq!(s.columns[0].category, Category::TravelImpedance);
        assert_eq!(s.columns[0].units, "USD");
        assert_eq!(s.columns[1].category, Category::Other);
        assert_eq!(s.group_column().unwrap().name, "ctx");
        assert_eq!(Schema::parse(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(Schema::parse("[[column]]\nname = \"a\"\nrole = \"predictor\"\n").is_err());
        let dup = format!("{TEXT}\n[[column]]\nname = \"fare\"\nrole = \"excluded\"\n");
        assert!(Schema::parse(&dup).is_err());
        assert!(Schema::parse(&TEXT.replace("travel_impedance", "nonsense")).is_err());
    }

    #[test]
    fn group_column_override() {
        let s = Schema::parse(TEXT).unwrap().with_group_column("fare").unwrap();
        assert_eq!(s.group_column().unwrap().name, "fare");
        assert_eq!(s.column("ctx").unwrap().role, Role::Excluded);
        assert!(matches!(Schema::parse(TEXT).unwrap().with_group_column("nope"), Err(Error::Label(_))));
    }
}
