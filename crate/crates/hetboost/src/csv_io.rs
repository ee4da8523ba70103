//! Dataset CSV reading and writing.
//!
//! Files are UTF-8 with a header row and comma delimiters. Predictor and
//! target cells are decimal numbers; the group column holds string labels.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use hetboost_core::{FeatureMeta, Role, TabularDataset};

use crate::error::{Error, Result};
use crate::schema::Schema;

pub fn load_csv(path: &Path, schema: &Schema) -> Result<TabularDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

/// Reads a dataset; every header column must be declared in `schema` and
/// every declared column must be present. Row order is preserved.
pub fn read_csv(reader: impl Read, schema: &Schema) -> Result<TabularDataset> {
    schema.validate()?;
    let group_meta = schema.group_column()?.clone();
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Schema(format!("cannot read header: {e}")))?.clone();
    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, name) in header.iter().enumerate() {
        if schema.column(name).is_none() {
            return Err(Error::Schema(format!("column `{name}` is not declared in the schema")));
        }
        if position.insert(name, i).is_some() {
            return Err(Error::Schema(format!("column `{name}` appears twice in the header")));
        }
    }
    for c in &schema.columns {
        if !position.contains_key(c.name.as_str()) {
            return Err(Error::Schema(format!("missing column `{}`", c.name)));
        }
    }
    let predictors: Vec<&FeatureMeta> = schema.columns.iter().filter(|c| c.role == Role::Predictor).collect();
    let target_meta = schema.columns.iter().find(|c| c.role == Role::Target).expect("validated");
    let pred_pos: Vec<usize> = predictors.iter().map(|c| position[c.name.as_str()]).collect();
    let target_pos = position[target_meta.name.as_str()];
    let group_pos = position[group_meta.name.as_str()];

    let mut labels: Vec<String> = schema.group_labels.clone().unwrap_or_default();
    let fixed_labels = schema.group_labels.is_some();
    let mut x = Vec::new();
    let mut target = Vec::new();
    let mut groups = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| Error::Parse { row, column: String::new(), message: e.to_string() })?;
        let number = |pos: usize, name: &str| -> Result<f64> {
            let cell = rec.get(pos).unwrap_or("").trim();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: name.to_string(),
                message: if cell.is_empty() { "empty cell".into() } else { format!("`{cell}` is not a number") },
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { row, column: name.to_string(), message: "value is not finite".into() });
            }
            Ok(v)
        };
        for (meta, &pos) in predictors.iter().zip(&pred_pos) {
            x.push(number(pos, &meta.name)?);
        }
        target.push(number(target_pos, &target_meta.name)?);
        let label = rec.get(group_pos).unwrap_or("").trim();
        let id = match labels.iter().position(|l| l == label) {
            Some(id) => id,
            None if fixed_labels => {
                return Err(Error::Label(format!("row {row}: unknown group label `{label}`")));
            }
            None if label.is_empty() => {
                return Err(Error::Label(format!("row {row}: empty group label")));
            }
            None => {
                labels.push(label.to_string());
                labels.len() - 1
            }
        };
        groups.push(id);
    }
    if target.is_empty() {
        return Err(Error::Schema("the file has no data rows".into()));
    }
    // declared labels without rows are dropped so every group is nonempty
    let mut used = vec![false; labels.len()];
    for &g in &groups {
        used[g] = true;
    }
    if used.iter().any(|u| !u) {
        let mut remap = vec![usize::MAX; labels.len()];
        let mut kept = Vec::new();
        for (g, label) in labels.into_iter().enumerate() {
            if used[g] {
                remap[g] = kept.len();
                kept.push(label);
            } else {
                log::warn!("group label `{label}` has no rows and is dropped");
            }
        }
        labels = kept;
        groups.iter_mut().for_each(|g| *g = remap[*g]);
    }
    Ok(TabularDataset::new(
        predictors.into_iter().cloned().collect(),
        x,
        target_meta.clone(),
        target,
        group_meta,
        labels,
        groups,
    )?)
}

/// Schema that reads back a file produced by [`write_csv`].
pub fn schema_of(data: &TabularDataset) -> Schema {
    Schema {
        group_labels: Some(data.group_spec().labels.clone()),
        columns: data.meta(),
    }
}

/// Writes predictors, target and group label, in that order. Numbers use
/// the shortest representation that parses back to the same bits.
pub fn write_csv(data: &TabularDataset, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = data.feature_names();
    header.push(&data.target_meta().name);
    header.push(&data.group_meta().name);
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in data.rows().take(data.n_rows()).enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(data.target()[i].to_string());
        rec.push(data.group_label(i).to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn save_csv(data: &TabularDataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(data, std::io::BufWriter::new(file))
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        other => Error::format("<csv>", format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(extra: &str) -> Schema {
        Schema::parse(&format!(
            "{extra}\n[[column]]\nname = \"x1\"\nrole = \"predictor\"\n\n[[column]]\nname = \"y\"\nrole = \"target\"\n\n[[column]]\nname = \"ctx\"\nrole = \"group_label\"\n"
        ))
        .unwrap()
    }

    #[test]
    fn reads_three_rows() {
        let text = "x1,y,ctx\n1.5,2,downtown\n2.5,3,airport\n3.5,4,neighborhood\n";
        let d = read_csv(text.as_bytes(), &schema("")).unwrap();
        assert_eq!((d.n_rows(), d.n_features(), d.group_spec().len()), (3, 1, 3));
        assert_eq!(d.group_spec().labels, vec!["downtown", "airport", "neighborhood"]);
        assert_eq!(d.column(0), vec![1.5, 2.5, 3.5]);
    }

    #[test]
    fn column_order_in_file_does_not_matter() {
        let text = "ctx,y,x1\na,2,1\n";
        let d = read_csv(text.as_bytes(), &schema("")).unwrap();
        assert_eq!((d.value(0, 0), d.target()[0]), (1.0, 2.0));
    }

    #[test]
    fn error_paths() {
        let s = schema("");
        match read_csv("x1,ctx\n1,a\n".as_bytes(), &s).unwrap_err() {
            Error::Schema(msg) => assert!(msg.contains("`y`"), "{msg}"),
            e => panic!("{e}"),
        }
        match read_csv("x1,y,ctx\n1,2,a\n1,,a\n".as_bytes(), &s).unwrap_err() {
            Error::Parse { row, column, .. } => assert_eq!((row, column.as_str()), (2, "y")),
            e => panic!("{e}"),
        }
        match read_csv("x1,y,ctx\nabc,2,a\n".as_bytes(), &s).unwrap_err() {
            Error::Parse { row, column, .. } => assert_eq!((row, column.as_str()), (1, "x1")),
            e => panic!("{e}"),
        }
        assert!(matches!(read_csv("x1,y,ctx,zz\n1,2,a,3\n".as_bytes(), &s), Err(Error::Schema(_))));
        let fixed = schema("group_labels = [\"a\", \"b\"]");
        assert!(matches!(read_csv("x1,y,ctx\n1,2,c\n".as_bytes(), &fixed), Err(Error::Label(_))));
    }

    #[test]
    fn declared_but_absent_labels_are_dropped() {
        let fixed = schema("group_labels = [\"a\", \"b\", \"c\"]");
        let d = read_csv("x1,y,ctx\n1,2,c\n2,3,a\n".as_bytes(), &fixed).unwrap();
        assert_eq!(d.group_spec().labels, vec!["a", "c"]);
        assert_eq!(d.groups(), &[1, 0]);
    }

    #[test]
    fn excluded_columns_are_ignored() {
        let s = Schema::parse(
            "[[column]]\nname = \"x1\"\nrole = \"predictor\"\n[[column]]\nname = \"id\"\nrole = \"excluded\"\n[[column]]\nname = \"y\"\nrole = \"target\"\n[[column]]\nname = \"ctx\"\nrole = \"group_label\"\n",
        )
        .unwrap();
        let d = read_csv("x1,id,y,ctx\n1,zone-7,2,a\n".as_bytes(), &s).unwrap();
        assert_eq!(d.feature_names(), vec!["x1"]);
    }
}
