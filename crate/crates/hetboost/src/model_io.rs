//! Plain-text model files.
//!
//! ```text
//! hetboost-ensemble 1
//! base_score 12.5
//! learning_rate 0.05
//! n_features 3
//! n_trees 2
//! tree 0 3
//! split 1 0.5 1 2 40
//! leaf -0.25 22
//! leaf 0.31 18
//! tree 1 1
//! leaf 0 40
//! ```
//!
//! Node lines follow the in-memory node order. Numbers are written in the
//! shortest form that parses back to the same `f64`, so a save/load round
//! trip is bit-exact.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use hetboost_core::{Ensemble, RegressionTree, TreeNode};

use crate::error::{Error, Result};

const MAGIC: &str = "hetboost-ensemble 1";

pub fn to_text(model: &Ensemble) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "base_score {}", model.base_score());
    let _ = writeln!(s, "learning_rate {}", model.learning_rate());
    let _ = writeln!(s, "n_features {}", model.n_features());
    let _ = writeln!(s, "n_trees {}", model.trees().len());
    for (k, tree) in model.trees().iter().enumerate() {
        let _ = writeln!(s, "tree {k} {}", tree.nodes().len());
        for node in tree.nodes() {
            let _ = match *node {
                TreeNode::Split { feature, threshold, left, right, cover } => {
                    writeln!(s, "split {feature} {threshold} {left} {right} {cover}")
                }
                TreeNode::Leaf { weight, cover } => writeln!(s, "leaf {weight} {cover}"),
            };
        }
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if !line.is_empty() {
                return Ok((i + 1, line.split_whitespace().collect()));
            }
        }
        Err(Error::format(self.path, "unexpected end of file"))
    }

    fn err(&self, line: usize, message: impl std::fmt::Display) -> Error {
        Error::format(self.path, format!("line {line}: {message}"))
    }

    fn field<T: FromStr>(&self, line: usize, tokens: &[&str], i: usize) -> Result<T> {
        tokens
            .get(i)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err(line, format!("bad or missing field {}", i + 1)))
    }

    fn keyed<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, tokens) = self.next_line()?;
        if tokens.len() != 2 || tokens[0] != key {
            return Err(self.err(line, format!("expected `{key} <value>`")));
        }
        self.field(line, &tokens, 1)
    }
}

/// Parses a model file; `path` is only used in error messages.
pub fn from_text(text: &str, path: &Path) -> Result<Ensemble> {
    let mut lines = Lines { inner: text.lines().enumerate(), path };
    let (line, tokens) = lines.next_line()?;
    if tokens.join(" ") != MAGIC {
        return Err(lines.err(line, "not a hetboost model file"));
    }
    let base: f64 = lines.keyed("base_score")?;
    let lr: f64 = lines.keyed("learning_rate")?;
    let m: usize = lines.keyed("n_features")?;
    let n_trees: usize = lines.keyed("n_trees")?;
    let mut trees = Vec::with_capacity(n_trees);
    for k in 0..n_trees {
        let (line, tokens) = lines.next_line()?;
        if tokens.len() != 3 || tokens[0] != "tree" || lines.field::<usize>(line, &tokens, 1)? != k {
            return Err(lines.err(line, format!("expected `tree {k} <node count>`")));
        }
        let count: usize = lines.field(line, &tokens, 2)?;
        let mut nodes = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, t) = lines.next_line()?;
            let node = match (t.first().copied(), t.len()) {
                (Some("split"), 6) => TreeNode::Split {
                    feature: lines.field(line, &t, 1)?,
                    threshold: lines.field(line, &t, 2)?,
                    left: lines.field(line, &t, 3)?,
                    right: lines.field(line, &t, 4)?,
                    cover: lines.field(line, &t, 5)?,
                },
                (Some("leaf"), 3) => TreeNode::Leaf {
                    weight: lines.field(line, &t, 1)?,
                    cover: lines.field(line, &t, 2)?,
                },
                _ => return Err(lines.err(line, "expected a `split` or `leaf` node")),
            };
            nodes.push(node);
        }
        let tree = RegressionTree::new(nodes).map_err(|e| lines.err(line, format!("tree {k}: {e}")))?;
        trees.push(tree);
    }
    if let Ok((line, _)) = lines.next_line() {
        return Err(lines.err(line, "trailing content after the last tree"));
    }
    Ensemble::new(base, lr, m, trees).map_err(|e| Error::format(path, e.to_string()))
}

pub fn save(model: &Ensemble, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(model)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_text(&text, path)
}
