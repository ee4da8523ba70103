//! Seeded synthetic grouped datasets with known per-group response functions.
//!
//! These provide ground truth for checking that conditional dependence curves
//! recover group-specific effects.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::distr::{Distribution, Uniform};
use rand_distr::Normal;

use crate::dataset::{Category, FeatureMeta, Role, TabularDataset};
use crate::error::{Error, Result};

/// A deterministic response function of the feature vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Response {
    Constant { value: f64 },
    Linear { feature: usize, slope: f64, intercept: f64 },
    /// `scale * (x - center)^2`
    UShape { feature: usize, center: f64, scale: f64 },
    /// `below` for `x < at`, `above` otherwise.
    Threshold { feature: usize, at: f64, below: f64, above: f64 },
    /// Linear interpolation through `(x, y)` knots sorted by `x`, constant beyond the ends.
    Piecewise { feature: usize, knots: Vec<(f64, f64)> },
    Sum { terms: Vec<Response> },
}

impl Response {
    pub fn eval(&self, row: &[f64]) -> f64 {
        match self {
            Response::Constant { value } => *value,
            Response::Linear { feature, slope, intercept } => intercept + slope * row[*feature],
            Response::UShape { feature, center, scale } => {
                let d = row[*feature] - center;
                scale * d * d
            }
            Response::Threshold { feature, at, below, above } => {
                if row[*feature] < *at {
                    *below
                } else {
                    *above
                }
            }
            Response::Piecewise { feature, knots } => piecewise(knots, row[*feature]),
            Response::Sum { terms } => terms.iter().map(|t| t.eval(row)).sum(),
        }
    }

    fn validate(&self, m: usize) -> Result<()> {
        let check = |f: usize| {
            if f < m {
                Ok(())
            } else {
                Err(Error::arg(format!("response refers to feature {f}, only {m} exist")))
            }
        };
        match self {
            Response::Constant { .. } => Ok(()),
            Response::Linear { feature, .. }
            | Response::UShape { feature, .. }
            | Response::Threshold { feature, .. } => check(*feature),
            Response::Piecewise { feature, knots } => {
                check(*feature)?;
                if knots.is_empty() || knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return Err(Error::arg("piecewise knots must be nonempty with increasing x"));
                }
                Ok(())
            }
            Response::Sum { terms } => terms.iter().try_for_each(|t| t.validate(m)),
        }
    }
}

fn piecewise(knots: &[(f64, f64)], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = knots.partition_point(|&(kx, _)| kx <= x);
    let (x0, y0) = knots[k - 1];
    let (x1, y1) = knots[k];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// One group of a synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupSynth {
    pub label: String,
    pub n: usize,
    /// Inclusive `(lo, hi)` sampling range per feature.
    pub ranges: Vec<(f64, f64)>,
    pub response: Response,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticSpec {
    pub feature_names: Vec<String>,
    pub groups: Vec<GroupSynth>,
    pub noise_sd: f64,
    pub seed: u64,
}

/// Per-group response functions used to generate a dataset.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    pub feature_names: Vec<String>,
    pub noise_sd: f64,
    pub groups: Vec<(String, Response)>,
}

impl GroundTruth {
    pub fn response(&self, label: &str) -> Option<&Response> {
        self.groups.iter().find(|(l, _)| l == label).map(|(_, r)| r)
    }
}

impl SyntheticSpec {
    /// Heterogeneity demo. Features are `x` on [0, 10] for every group, a
    /// `context` feature whose range separates the groups, and an
    /// irrelevant `noise` feature on [0, 1]. Responses cycle through
    /// U-shape `(x - 5)^2`, flat 0, threshold at `x = 3` (0 / 4), and
    /// linear `x`.
    pub fn demo(labels: &[&str], n_per_group: usize, noise_sd: f64, seed: u64) -> Self {
        let groups = labels
            .iter()
            .enumerate()
            .map(|(g, label)| {
                let c = 2.0 * g as f64;
                let response = match g % 4 {
                    0 => Response::UShape { feature: 0, center: 5.0, scale: 1.0 },
                    1 => Response::Constant { value: 0.0 },
                    2 => Response::Threshold { feature: 0, at: 3.0, below: 0.0, above: 4.0 },
                    _ => Response::Linear { feature: 0, slope: 1.0, intercept: 0.0 },
                };
                GroupSynth {
                    label: label.to_string(),
                    n: n_per_group,
                    ranges: alloc::vec![(0.0, 10.0), (c, c + 1.0), (0.0, 1.0)],
                    response,
                }
            })
            .collect();
        SyntheticSpec {
            feature_names: ["x", "context", "noise"].iter().map(|s| s.to_string()).collect(),
            groups,
            noise_sd,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.noise_sd >= 0.0) || !self.noise_sd.is_finite() {
            return Err(Error::arg("noise standard deviation must be finite and non-negative"));
        }
        let m = self.feature_names.len();
        if m == 0 {
            return Err(Error::arg("at least one feature is required"));
        }
        if self.groups.is_empty() {
            return Err(Error::arg("at least one group is required"));
        }
        for g in &self.groups {
            if g.n == 0 {
                return Err(Error::arg(format!("group `{}` has n = 0", g.label)));
            }
            if g.ranges.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: g.ranges.len() });
            }
            if g.ranges.iter().any(|&(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
                return Err(Error::arg(format!("group `{}` has an invalid feature range", g.label)));
            }
            g.response.validate(m)?;
        }
        Ok(())
    }
}

/// Draws features uniformly on each group's ranges and sets
/// `target = response(features) + N(0, noise_sd)`. Rows are emitted group
/// by group in declaration order.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<(TabularDataset, GroundTruth)> {
    spec.validate()?;
    let m = spec.feature_names.len();
    let mut rng = crate::seed::rng(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sd).map_err(|e| Error::arg(format!("{e}")))?;
    let total: usize = spec.groups.iter().map(|g| g.n).sum();
    let mut x = Vec::with_capacity(total * m);
    let mut target = Vec::with_capacity(total);
    let mut groups = Vec::with_capacity(total);
    for (gi, g) in spec.groups.iter().enumerate() {
        let dists: Vec<Uniform<f64>> = g
            .ranges
            .iter()
            .map(|&(lo, hi)| Uniform::new_inclusive(lo, hi).map_err(|e| Error::arg(format!("{e}"))))
            .collect::<Result<_>>()?;
        for _ in 0..g.n {
            let start = x.len();
            x.extend(dists.iter().map(|d| d.sample(&mut rng)));
            let y = g.response.eval(&x[start..]) + noise.sample(&mut rng);
            target.push(y);
            groups.push(gi);
        }
    }
    let predictors = spec
        .feature_names
        .iter()
        .map(|n| FeatureMeta::predictor(n.clone(), Category::Other))
        .collect();
    let data = TabularDataset::new(
        predictors,
        x,
        FeatureMeta::new("y", Role::Target, Category::Other),
        target,
        FeatureMeta::new("group", Role::GroupLabel, Category::Other),
        spec.groups.iter().map(|g| g.label.clone()).collect(),
        groups,
    )?;
    let truth = GroundTruth {
        feature_names: spec.feature_names.clone(),
        noise_sd: spec.noise_sd,
        groups: spec.groups.iter().map(|g| (g.label.clone(), g.response.clone())).collect(),
    };
    Ok((data, truth))
}
