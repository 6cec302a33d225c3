//! Classifier primitives: regularized linear models trained on hinge loss,
//! random-subspace majority-vote ensembles, and a one-class radial boundary.
//!
//! The linear trainer minimizes `penalty(w) + c * sum_i hinge(y_i * score(x_i))`
//! with a full-batch proximal subgradient scheme. The optimizer itself is not
//! part of any behavioral contract; only the objective and the resulting
//! sparse-vs-distributed weight behavior are.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::data::{ClassLabel, Dataset, FeatureVector};
use crate::error::{Error, Result};

/// Default epoch count for the batch trainer. Enough for the hinge term to
/// clear on separable data so that L1 shrinkage can drive inactive weights
/// to exactly zero.
pub const DEFAULT_EPOCHS: usize = 400;

/// Penalty kind for linear training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegKind {
    L1,
    L2,
}

/// Regularization setup: penalty kind plus the loss weight `c` (larger `c`
/// means the hinge term dominates, i.e. less regularization).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationSpec {
    pub kind: RegKind,
    pub c: f64,
}

impl RegularizationSpec {
    pub fn l1(c: f64) -> Self {
        RegularizationSpec { kind: RegKind::L1, c }
    }

    pub fn l2(c: f64) -> Self {
        RegularizationSpec { kind: RegKind::L2, c }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidSpec(format!("c must be > 0, got {}", self.c)));
        }
        Ok(())
    }
}

/// A linear decision rule: Legitimate iff `w . x + b >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub reg: RegularizationSpec,
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Raw decision score. Caller guarantees matching dimensionality.
    pub fn score(&self, x: &FeatureVector) -> f64 {
        debug_assert_eq!(x.dim(), self.weights.len());
        self.weights
            .iter()
            .zip(x.values())
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + self.bias
    }

    pub fn classify(&self, x: &FeatureVector) -> ClassLabel {
        if self.score(x) >= 0.0 {
            ClassLabel::Legitimate
        } else {
            ClassLabel::Malicious
        }
    }
}

/// Label plus score, with an explicit dimensionality check.
pub fn predict(model: &LinearModel, x: &FeatureVector) -> Result<(ClassLabel, f64)> {
    if x.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.dim(),
        });
    }
    let score = model.score(x);
    Ok((model.classify(x), score))
}

/// Train a linear model on the hinge objective. The batch solver is fully
/// deterministic; `seed` is accepted for interface stability and unused.
pub fn train_linear(
    train: &Dataset,
    reg: RegularizationSpec,
    epochs: usize,
    seed: u64,
) -> Result<LinearModel> {
    let _ = seed;
    reg.validate()?;
    if !train.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let n = train.len() as f64;
    let dim = train.dim;
    let c = reg.c;
    let targets: Vec<f64> = train.labels.iter().map(|l| l.sign()).collect();

    let mut w = vec![0.0f64; dim];
    let mut b = 0.0f64;
    for t in 0..epochs {
        let eta = 4.0 / c.max(1.0) / (1.0 + 0.02 * t as f64);
        // Subgradient of the mean hinge term over the active set.
        let mut gw = vec![0.0f64; dim];
        let mut gb = 0.0f64;
        for (sample, &y) in train.samples.iter().zip(&targets) {
            let margin = y * (sample
                .values()
                .iter()
                .zip(&w)
                .map(|(v, wi)| v * wi)
                .sum::<f64>()
                + b);
            if margin < 1.0 {
                for (g, &v) in gw.iter_mut().zip(sample.values()) {
                    *g -= y * v;
                }
                gb -= y;
            }
        }
        let scale = c / n;
        match reg.kind {
            RegKind::L2 => {
                for (wi, g) in w.iter_mut().zip(&gw) {
                    *wi -= eta * (g * scale + *wi / n);
                }
            }
            RegKind::L1 => {
                let threshold = eta / n;
                for (wi, g) in w.iter_mut().zip(&gw) {
                    let moved = *wi - eta * g * scale;
                    *wi = moved.signum() * (moved.abs() - threshold).max(0.0);
                }
            }
        }
        b -= eta * gb * scale;
    }
    Ok(LinearModel {
        weights: w,
        bias: b,
        reg,
    })
}

/// Majority-vote ensemble whose members are linear models over random
/// feature subsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceEnsemble {
    pub members: Vec<(Vec<usize>, LinearModel)>,
    pub k: usize,
    pub feature_fraction: f64,
    pub dim: usize,
}

impl SubspaceEnsemble {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Majority label at the 0.5 vote threshold (ties are Legitimate).
    pub fn classify(&self, x: &FeatureVector) -> ClassLabel {
        if self.confidence(x) >= 0.5 {
            ClassLabel::Legitimate
        } else {
            ClassLabel::Malicious
        }
    }

    /// Fraction of members voting Legitimate. Caller guarantees dimensions.
    pub fn confidence(&self, x: &FeatureVector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        let votes = self
            .members
            .iter()
            .filter(|(subset, model)| {
                let projected = x.project(subset);
                model.classify(&projected) == ClassLabel::Legitimate
            })
            .count();
        votes as f64 / self.members.len() as f64
    }
}

/// Train `k` members on independently drawn feature subsets of size
/// `round(feature_fraction * dim)` (without replacement inside a subset).
pub fn train_subspace_ensemble(
    train: &Dataset,
    k: usize,
    feature_fraction: f64,
    reg: RegularizationSpec,
    seed: u64,
) -> Result<SubspaceEnsemble> {
    if k == 0 {
        return Err(Error::InvalidSpec("ensemble needs at least one member".into()));
    }
    if !(feature_fraction > 0.0 && feature_fraction <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "feature_fraction must be in (0,1], got {feature_fraction}"
        )));
    }
    let subset_size = (feature_fraction * train.dim as f64).round() as usize;
    if subset_size < 1 {
        return Err(Error::InvalidSpec(
            "feature_fraction rounds to an empty subset".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(k);
    for i in 0..k {
        let mut subset = rand::seq::index::sample(&mut rng, train.dim, subset_size).into_vec();
        subset.sort_unstable();
        let projected = train.project(&subset)?;
        let model = train_linear(&projected, reg, DEFAULT_EPOCHS, seed.wrapping_add(i as u64))?;
        members.push((subset, model));
    }
    Ok(SubspaceEnsemble {
        members,
        k,
        feature_fraction,
        dim: train.dim,
    })
}

/// Vote fraction for Legitimate, with an explicit dimensionality check.
pub fn ensemble_confidence(ensemble: &SubspaceEnsemble, x: &FeatureVector) -> Result<f64> {
    if x.dim() != ensemble.dim {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim,
            got: x.dim(),
        });
    }
    Ok(ensemble.confidence(x))
}

/// One-class boundary: mean radial-kernel score against the retained
/// Legitimate training samples, thresholded at the empirical nu-quantile of
/// the training scores (so roughly a nu-fraction of its own data is rejected).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneClassModel {
    pub nu: f64,
    pub gamma: f64,
    pub threshold: f64,
    pub reference: Vec<FeatureVector>,
}

impl OneClassModel {
    pub fn dim(&self) -> usize {
        self.reference.first().map_or(0, FeatureVector::dim)
    }

    /// Mean of `exp(-gamma * ||x - r||^2)` over the reference samples.
    pub fn kernel_score(&self, x: &FeatureVector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim());
        let sum: f64 = self
            .reference
            .iter()
            .map(|r| {
                let d2: f64 = r
                    .values()
                    .iter()
                    .zip(x.values())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (-self.gamma * d2).exp()
            })
            .sum();
        sum / self.reference.len() as f64
    }

    pub fn accepts(&self, x: &FeatureVector) -> bool {
        self.kernel_score(x) >= self.threshold
    }
}

/// Fit the nu-quantile radial boundary on Legitimate-only data.
pub fn train_one_class(legitimate_only: &Dataset, nu: f64, gamma: f64) -> Result<OneClassModel> {
    if legitimate_only.is_empty() {
        return Err(Error::Empty("one-class training set"));
    }
    if legitimate_only.count(ClassLabel::Malicious) > 0 {
        return Err(Error::InvalidSpec(
            "one-class training data must contain only Legitimate samples".into(),
        ));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::InvalidSpec(format!("nu must be in (0,1), got {nu}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidSpec(format!("gamma must be > 0, got {gamma}")));
    }
    let mut model = OneClassModel {
        nu,
        gamma,
        threshold: f64::NEG_INFINITY,
        reference: legitimate_only.samples.clone(),
    };
    let mut scores: Vec<f64> = model
        .reference
        .iter()
        .map(|x| model.kernel_score(x))
        .collect();
    scores.sort_by(|a, b| a.partial_cmp(b).expect("kernel scores are finite"));
    let idx = ((nu * scores.len() as f64).floor() as usize).min(scores.len() - 1);
    model.threshold = scores[idx];
    Ok(model)
}

/// Boundary test with an explicit dimensionality check.
pub fn one_class_accepts(model: &OneClassModel, x: &FeatureVector) -> Result<bool> {
    if x.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.dim(),
        });
    }
    Ok(model.accepts(x))
}

/// Any trained decision model usable as a deterministic defender payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Linear(LinearModel),
    SubspaceEnsemble(SubspaceEnsemble),
    OneClass(OneClassModel),
}

impl TrainedModel {
    pub fn dim(&self) -> usize {
        match self {
            TrainedModel::Linear(m) => m.dim(),
            TrainedModel::SubspaceEnsemble(e) => e.dim(),
            TrainedModel::OneClass(m) => m.dim(),
        }
    }

    pub fn classify(&self, x: &FeatureVector) -> ClassLabel {
        match self {
            TrainedModel::Linear(m) => m.classify(x),
            TrainedModel::SubspaceEnsemble(e) => e.classify(x),
            TrainedModel::OneClass(m) => {
                if m.accepts(x) {
                    ClassLabel::Legitimate
                } else {
                    ClassLabel::Malicious
                }
            }
        }
    }
}

/// On-disk wrapper so stored models stay readable across releases.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub model: TrainedModel,
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    };
    let text =
        serde_json::to_string_pretty(&file).map_err(|e| Error::Serialization(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| Error::Serialization(e.to_string()))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Serialization(format!(
            "unsupported model format version {}",
            file.format_version
        )));
    }
    Ok(file.model)
}
