//! Shared helpers for unit tests.

use crate::data::{generate_synthetic, ClassLabel, Dataset, SyntheticSpec};
use crate::models::{LinearModel, RegularizationSpec, SubspaceEnsemble};

pub fn synthetic(dim: usize, n_per_class: usize, seed: u64) -> Dataset {
    generate_synthetic(&SyntheticSpec {
        dim,
        n_per_class,
        mu_legitimate: 0.75,
        mu_malicious: 0.25,
        sigma: 0.05,
        seed,
    })
    .unwrap()
}

pub fn legit_cluster(dim: usize, n: usize, seed: u64) -> Dataset {
    synthetic(dim, n, seed)
        .filter_label(ClassLabel::Legitimate)
        .unwrap()
}

/// Ensemble of `k` one-feature stumps with thresholds `(i - 0.5) / k`, so the
/// Legitimate vote count at scalar `x` is exactly `round(k * x)` for x on the
/// decile grid. Gives full control over vote fractions in tests.
pub fn stump_ensemble(k: usize) -> SubspaceEnsemble {
    let members = (1..=k)
        .map(|i| {
            let t = (i as f64 - 0.5) / k as f64;
            (
                vec![0usize],
                LinearModel {
                    weights: vec![1.0],
                    bias: -t,
                    reg: RegularizationSpec::l2(1.0),
                },
            )
        })
        .collect();
    SubspaceEnsemble {
        members,
        k,
        feature_fraction: 1.0,
        dim: 1,
    }
}
