//! Datasets: synthetic generation, CSV ingestion, normalization and splitting.
//!
//! All feature values are expected to live in `[0,1]` once a dataset has been
//! normalized; synthetic generation clips to that range directly. Labels are
//! strictly binary (`Legitimate` / `Malicious`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

/// Binary class label. `Legitimate` is the class the defender admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Legitimate,
    Malicious,
}

impl ClassLabel {
    /// Signed target used by the hinge-loss trainers: +1 legitimate, -1 malicious.
    pub fn sign(self) -> f64 {
        match self {
            ClassLabel::Legitimate => 1.0,
            ClassLabel::Malicious => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Legitimate => "Legitimate",
            ClassLabel::Malicious => "Malicious",
        }
    }
}

/// A single sample: an ordered vector of real-valued features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Self {
        FeatureVector(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Projection onto a subset of feature indices, in the given order.
    pub fn project(&self, indices: &[usize]) -> FeatureVector {
        FeatureVector(indices.iter().map(|&i| self.0[i]).collect())
    }
}

impl std::ops::Index<usize> for FeatureVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A labeled dataset with a fixed dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<FeatureVector>,
    pub labels: Vec<ClassLabel>,
    pub feature_names: Vec<String>,
    pub dim: usize,
}

impl Dataset {
    pub fn new(
        samples: Vec<FeatureVector>,
        labels: Vec<ClassLabel>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("dataset has no samples"));
        }
        if samples.len() != labels.len() {
            return Err(Error::InvalidSpec(format!(
                "{} samples but {} labels",
                samples.len(),
                labels.len()
            )));
        }
        let dim = samples[0].dim();
        if dim == 0 {
            return Err(Error::Empty("samples have no features"));
        }
        if let Some(bad) = samples.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        if feature_names.len() != dim {
            return Err(Error::InvalidSpec(format!(
                "{} feature names for {} features",
                feature_names.len(),
                dim
            )));
        }
        Ok(Dataset {
            samples,
            labels,
            feature_names,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn count(&self, label: ClassLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn has_both_classes(&self) -> bool {
        self.count(ClassLabel::Legitimate) > 0 && self.count(ClassLabel::Malicious) > 0
    }

    /// Subset of samples carrying the given label, as a new dataset.
    pub fn filter_label(&self, label: ClassLabel) -> Result<Dataset> {
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        for (s, &l) in self.samples.iter().zip(&self.labels) {
            if l == label {
                samples.push(s.clone());
                labels.push(l);
            }
        }
        Dataset::new(samples, labels, self.feature_names.clone())
    }

    /// Keep only the feature columns at `indices` (in the given order).
    pub fn project(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::Empty("projection onto zero features"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bad,
            });
        }
        let samples = self.samples.iter().map(|s| s.project(indices)).collect();
        let names = indices
            .iter()
            .map(|&i| self.feature_names[i].clone())
            .collect();
        Dataset::new(samples, self.labels.clone(), names)
    }
}

/// Parameters for the two-cluster Gaussian synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub dim: usize,
    pub n_per_class: usize,
    pub mu_legitimate: f64,
    pub mu_malicious: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    /// The conventional configuration: 10 features, 250 samples per class,
    /// clusters at 0.75 / 0.25 with sigma 0.05.
    pub fn standard(dim: usize, seed: u64) -> Self {
        SyntheticSpec {
            dim,
            n_per_class: 250,
            mu_legitimate: 0.75,
            mu_malicious: 0.25,
            sigma: 0.05,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dim must be positive".into()));
        }
        if self.n_per_class == 0 {
            return Err(Error::InvalidSpec("n_per_class must be positive".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidSpec("sigma must be > 0".into()));
        }
        for (name, mu) in [
            ("mu_legitimate", self.mu_legitimate),
            ("mu_malicious", self.mu_malicious),
        ] {
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::InvalidSpec(format!("{name} must be in [0,1]")));
            }
        }
        Ok(())
    }
}

/// Draw `2 * n_per_class` samples, one Gaussian cluster per class, clipped to
/// the unit cube. Deterministic for a given seed.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let legit = Normal::new(spec.mu_legitimate, spec.sigma)
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let mal = Normal::new(spec.mu_malicious, spec.sigma)
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;

    let mut samples = Vec::with_capacity(2 * spec.n_per_class);
    let mut labels = Vec::with_capacity(2 * spec.n_per_class);
    for (dist, label) in [(legit, ClassLabel::Legitimate), (mal, ClassLabel::Malicious)] {
        for _ in 0..spec.n_per_class {
            let values = (0..spec.dim)
                .map(|_| dist.sample(&mut rng).clamp(0.0, 1.0))
                .collect();
            samples.push(FeatureVector(values));
            labels.push(label);
        }
    }
    let names = (0..spec.dim).map(|i| format!("f{i}")).collect();
    Dataset::new(samples, labels, names)
}

/// Load a dataset from a headered CSV file.
///
/// Every non-label column becomes a feature, in header order. The raw label
/// value equal to `legitimate_value` maps to `Legitimate`; the single other
/// value maps to `Malicious`. More than two distinct label values is an error.
pub fn load_csv(path: &Path, label_column: &str, legitimate_value: &str) -> Result<Dataset> {
    let display = path.display().to_string();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Csv {
        path: display.clone(),
        row: 0,
        message: e.to_string(),
    })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: display.clone(),
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Csv {
            path: display.clone(),
            row: 0,
            message: format!("label column {label_column:?} not found in header"),
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();
    if feature_names.is_empty() {
        return Err(Error::Csv {
            path: display,
            row: 0,
            message: "no feature columns besides the label".into(),
        });
    }

    let mut samples = Vec::new();
    let mut raw_labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header row
        let record = record.map_err(|e| Error::Csv {
            path: display.clone(),
            row,
            message: e.to_string(),
        })?;
        let mut values = Vec::with_capacity(feature_names.len());
        for (col, field) in record.iter().enumerate() {
            if col == label_idx {
                raw_labels.push(field.to_string());
                continue;
            }
            let parsed: f64 = field.trim().parse().map_err(|_| Error::Csv {
                path: display.clone(),
                row,
                message: format!(
                    "non-numeric value {:?} in column {:?}",
                    field,
                    headers.get(col).unwrap_or("")
                ),
            })?;
            values.push(parsed);
        }
        if values.len() != feature_names.len() || raw_labels.len() != samples.len() + 1 {
            return Err(Error::Csv {
                path: display.clone(),
                row,
                message: format!(
                    "expected {} fields, found {}",
                    feature_names.len() + 1,
                    record.len()
                ),
            });
        }
        samples.push(FeatureVector(values));
    }

    let mut distinct: Vec<&String> = Vec::new();
    for l in &raw_labels {
        if !distinct.contains(&l) {
            distinct.push(l);
        }
    }
    if distinct.len() > 2 {
        return Err(Error::Csv {
            path: display,
            row: 0,
            message: format!("label column has {} distinct values, expected 2", distinct.len()),
        });
    }
    if !distinct.iter().any(|v| v.as_str() == legitimate_value) {
        return Err(Error::Csv {
            path: display,
            row: 0,
            message: format!("legitimate label value {legitimate_value:?} not present"),
        });
    }
    let labels = raw_labels
        .iter()
        .map(|l| {
            if l == legitimate_value {
                ClassLabel::Legitimate
            } else {
                ClassLabel::Malicious
            }
        })
        .collect();
    Dataset::new(samples, labels, feature_names)
}

/// Write a dataset in the same CSV convention `load_csv` reads: feature
/// columns in order, then a `label` column holding the class names.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::Csv {
        path: path.display().to_string(),
        row: 0,
        message: e.to_string(),
    })?;
    let mut header: Vec<&str> = dataset.feature_names.iter().map(String::as_str).collect();
    header.push("label");
    writer
        .write_record(&header)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    for (sample, label) in dataset.samples.iter().zip(&dataset.labels) {
        let mut record: Vec<String> = sample.values().iter().map(|v| v.to_string()).collect();
        record.push(label.as_str().to_string());
        writer
            .write_record(&record)
            .map_err(|e| Error::Serialization(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Rescale every feature column to `[0,1]` via `(x - min) / (max - min)`.
/// Constant columns map to all zeros.
pub fn min_max_normalize(dataset: &Dataset) -> Result<Dataset> {
    if dataset.is_empty() {
        return Err(Error::Empty("cannot normalize an empty dataset"));
    }
    let dim = dataset.dim;
    let mut mins = vec![f64::INFINITY; dim];
    let mut maxs = vec![f64::NEG_INFINITY; dim];
    for sample in &dataset.samples {
        for (j, &v) in sample.values().iter().enumerate() {
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    let samples = dataset
        .samples
        .iter()
        .map(|s| {
            FeatureVector(
                s.values()
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let range = maxs[j] - mins[j];
                        if range == 0.0 {
                            0.0
                        } else {
                            (v - mins[j]) / range
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Dataset::new(samples, dataset.labels.clone(), dataset.feature_names.clone())
}

/// Deterministic, class-stratified shuffle split. Per class, `train_fraction`
/// of the samples (rounded) go to the first returned dataset.
pub fn shuffle_split(dataset: &Dataset, seed: u64, train_fraction: f64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "train_fraction must be in (0,1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in [ClassLabel::Legitimate, ClassLabel::Malicious] {
        let mut idx: Vec<usize> = (0..dataset.len())
            .filter(|&i| dataset.labels[i] == class)
            .collect();
        // Fisher-Yates
        for i in (1..idx.len()).rev() {
            let j = rng.gen_range(0..=i);
            idx.swap(i, j);
        }
        let n_train = ((idx.len() as f64) * train_fraction).round() as usize;
        train_idx.extend_from_slice(&idx[..n_train]);
        test_idx.extend_from_slice(&idx[n_train..]);
    }
    // A final shuffle so class blocks are not contiguous.
    for split in [&mut train_idx, &mut test_idx] {
        for i in (1..split.len()).rev() {
            let j = rng.gen_range(0..=i);
            split.swap(i, j);
        }
    }
    let take = |idx: &[usize]| -> Result<Dataset> {
        if idx.is_empty() {
            return Err(Error::Empty("split produced an empty dataset"));
        }
        Dataset::new(
            idx.iter().map(|&i| dataset.samples[i].clone()).collect(),
            idx.iter().map(|&i| dataset.labels[i]).collect(),
            dataset.feature_names.clone(),
        )
    };
    Ok((take(&train_idx)?, take(&test_idx)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn spec(dim: usize, n: usize, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            dim,
            n_per_class: n,
            mu_legitimate: 0.75,
            mu_malicious: 0.25,
            sigma: 0.05,
            seed,
        }
    }

    #[test]
    fn synthetic_shape_and_range() {
        let d = generate_synthetic(&spec(10, 250, 7)).unwrap();
        assert_eq!(d.len(), 500);
        assert_eq!(d.dim, 10);
        assert_eq!(d.count(ClassLabel::Legitimate), 250);
        assert!(d
            .samples
            .iter()
            .all(|s| s.values().iter().all(|&v| (0.0..=1.0).contains(&v))));
    }

    #[test]
    fn synthetic_degenerate_variance_collapses_to_means() {
        let mut s = spec(4, 10, 3);
        s.sigma = 1e-300; // positive, but far below f64 resolution at 0.75
        let d = generate_synthetic(&s).unwrap();
        for (sample, label) in d.samples.iter().zip(&d.labels) {
            let expect = match label {
                ClassLabel::Legitimate => 0.75,
                ClassLabel::Malicious => 0.25,
            };
            assert!(sample.values().iter().all(|&v| v == expect));
        }
    }

    #[test]
    fn synthetic_empirical_mean_near_mu() {
        let d = generate_synthetic(&spec(10, 10_000, 1)).unwrap();
        for j in 0..10 {
            let mean: f64 = d
                .samples
                .iter()
                .zip(&d.labels)
                .filter(|(_, &l)| l == ClassLabel::Legitimate)
                .map(|(s, _)| s[j])
                .sum::<f64>()
                / 10_000.0;
            assert!(
                (mean - 0.75).abs() < 0.01,
                "dimension {j} mean {mean} too far from 0.75"
            );
        }
    }

    #[test]
    fn synthetic_deterministic_given_seed() {
        let a = generate_synthetic(&spec(5, 50, 42)).unwrap();
        let b = generate_synthetic(&spec(5, 50, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn synthetic_rejects_bad_spec() {
        let mut s = spec(10, 10, 0);
        s.sigma = 0.0;
        assert!(generate_synthetic(&s).is_err());
        let mut s = spec(0, 10, 0);
        s.dim = 0;
        assert!(generate_synthetic(&s).is_err());
    }

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_csv_basic() {
        let f = write_tmp("a,b,label\n0.1,0.2,Legitimate\n0.3,0.4,Malicious\n0.5,0.6,Legitimate\n");
        let d = load_csv(f.path(), "label", "Legitimate").unwrap();
        assert_eq!(d.dim, 2);
        assert_eq!(d.len(), 3);
        assert_eq!(d.feature_names, vec!["a", "b"]);
        assert_eq!(d.labels[1], ClassLabel::Malicious);
        assert_eq!(d.samples[2].values(), &[0.5, 0.6]);
    }

    #[test]
    fn load_csv_label_mapping() {
        let f = write_tmp("x,kind\n1,ham\n2,spam\n3,ham\n");
        let d = load_csv(f.path(), "kind", "ham").unwrap();
        assert_eq!(
            d.labels,
            vec![
                ClassLabel::Legitimate,
                ClassLabel::Malicious,
                ClassLabel::Legitimate
            ]
        );
    }

    #[test]
    fn load_csv_blank_cell_reports_row() {
        let f = write_tmp("a,b,label\n0.1,0.2,yes\n0.3,,no\n");
        let err = load_csv(f.path(), "label", "yes").unwrap_err();
        match err {
            Error::Csv { row, .. } => assert_eq!(row, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn load_csv_rejects_more_than_two_labels() {
        let f = write_tmp("a,label\n1,x\n2,y\n3,z\n");
        assert!(load_csv(f.path(), "label", "x").is_err());
    }

    #[test]
    fn load_csv_missing_file() {
        assert!(load_csv(Path::new("/nonexistent/file.csv"), "label", "x").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let d = generate_synthetic(&spec(3, 5, 11)).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_csv(&d, f.path()).unwrap();
        let back = load_csv(f.path(), "label", "Legitimate").unwrap();
        assert_eq!(d, back);
    }

    fn column_dataset(columns: Vec<Vec<f64>>) -> Dataset {
        let n = columns[0].len();
        let samples = (0..n)
            .map(|i| FeatureVector(columns.iter().map(|c| c[i]).collect()))
            .collect();
        let labels = (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    ClassLabel::Legitimate
                } else {
                    ClassLabel::Malicious
                }
            })
            .collect();
        let names = (0..columns.len()).map(|j| format!("f{j}")).collect();
        Dataset::new(samples, labels, names).unwrap()
    }

    #[test]
    fn normalize_rescales_column() {
        let d = column_dataset(vec![vec![2.0, 4.0, 6.0]]);
        let n = min_max_normalize(&d).unwrap();
        let col: Vec<f64> = n.samples.iter().map(|s| s[0]).collect();
        assert_eq!(col, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn normalize_identity_on_unit_column() {
        let d = column_dataset(vec![vec![0.0, 0.25, 1.0]]);
        let n = min_max_normalize(&d).unwrap();
        assert_eq!(n.samples, d.samples);
    }

    #[test]
    fn normalize_constant_column_to_zero() {
        let d = column_dataset(vec![vec![5.0, 5.0, 5.0]]);
        let n = min_max_normalize(&d).unwrap();
        assert!(n.samples.iter().all(|s| s[0] == 0.0));
    }

    #[test]
    fn normalize_is_idempotent() {
        let d = column_dataset(vec![vec![2.0, 4.0, 6.0], vec![-1.0, 0.0, 3.0]]);
        let once = min_max_normalize(&d).unwrap();
        let twice = min_max_normalize(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn split_sizes_and_determinism() {
        let d = generate_synthetic(&spec(4, 50, 9)).unwrap();
        let (train, test) = shuffle_split(&d, 5, 0.7).unwrap();
        assert_eq!(train.len(), 70);
        assert_eq!(test.len(), 30);
        let (train2, test2) = shuffle_split(&d, 5, 0.7).unwrap();
        assert_eq!(train, train2);
        assert_eq!(test, test2);
    }

    #[test]
    fn split_is_stratified() {
        // 60/40 class ratio must survive within one sample in each split.
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        for i in 0..100 {
            samples.push(FeatureVector(vec![i as f64]));
            labels.push(if i < 60 {
                ClassLabel::Legitimate
            } else {
                ClassLabel::Malicious
            });
        }
        let d = Dataset::new(samples, labels, vec!["f0".into()]).unwrap();
        let (train, test) = shuffle_split(&d, 21, 0.7).unwrap();
        assert!((train.count(ClassLabel::Legitimate) as i64 - 42).abs() <= 1);
        assert!((train.count(ClassLabel::Malicious) as i64 - 28).abs() <= 1);
        assert!((test.count(ClassLabel::Legitimate) as i64 - 18).abs() <= 1);
        assert!((test.count(ClassLabel::Malicious) as i64 - 12).abs() <= 1);
    }

    #[test]
    fn split_is_a_partition() {
        let d = generate_synthetic(&spec(3, 40, 2)).unwrap();
        let (train, test) = shuffle_split(&d, 8, 0.5).unwrap();
        let mut all: Vec<(Vec<u64>, ClassLabel)> = d
            .samples
            .iter()
            .zip(&d.labels)
            .map(|(s, &l)| (s.values().iter().map(|v| v.to_bits()).collect(), l))
            .collect();
        let mut joined: Vec<(Vec<u64>, ClassLabel)> = train
            .samples
            .iter()
            .zip(&train.labels)
            .chain(test.samples.iter().zip(&test.labels))
            .map(|(s, &l)| (s.values().iter().map(|v| v.to_bits()).collect(), l))
            .collect();
        all.sort();
        joined.sort();
        assert_eq!(all, joined);
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let d = generate_synthetic(&spec(2, 10, 1)).unwrap();
        assert!(shuffle_split(&d, 0, 0.0).is_err());
        assert!(shuffle_split(&d, 0, 1.0).is_err());
    }
}
