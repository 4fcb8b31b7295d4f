//! Per-system score reports.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::LabeledDataset;
use crate::error::Result;
use crate::metrics::{hex, registry_fingerprint, score, MetricId, MetricParams};

/// How a class equidistant from the gold class is counted in closeness
/// probabilities.
pub const TIE_CONVENTION: &str = "half";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub dataset: String,
    pub system: String,
    pub scale: Vec<String>,
    /// Higher-is-better scores keyed by metric id.
    pub scores: BTreeMap<String, f64>,
    pub params: BTreeMap<String, String>,
    pub tie_convention: String,
    /// SHA-256 over the metric registry, scale, metric list and parameters.
    pub config_fingerprint: String,
}

/// Fingerprint of an evaluation configuration.
pub fn config_fingerprint(scale: &[String], metrics: &[MetricId], params: &MetricParams) -> String {
    let mut hasher = Sha256::new();
    hasher.update(registry_fingerprint().as_bytes());
    for class in scale {
        hasher.update(class.as_bytes());
        hasher.update([0]);
    }
    hasher.update(b"|");
    for m in metrics {
        hasher.update(m.as_str().as_bytes());
        hasher.update([0]);
    }
    hasher.update(b"|");
    for (k, v) in params.to_map() {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update([0]);
    }
    hasher.update(TIE_CONVENTION.as_bytes());
    hex(&hasher.finalize())
}

/// Scores every system of `dataset` (in name order) under `metrics`. The
/// first metric failure aborts the evaluation.
pub fn evaluate(
    dataset: &LabeledDataset,
    dataset_name: &str,
    metrics: &[MetricId],
    params: &MetricParams,
) -> Result<Vec<MetricReport>> {
    let scale: Vec<String> = dataset.scale().classes().to_vec();
    let fingerprint = config_fingerprint(&scale, metrics, params);
    dataset
        .system_names()
        .map(|system| {
            let scores = metrics
                .iter()
                .map(|&m| Ok((m.as_str().to_string(), score(m, dataset, system, params)?)))
                .collect::<Result<_>>()?;
            Ok(MetricReport {
                dataset: dataset_name.to_string(),
                system: system.to_string(),
                scale: scale.clone(),
                scores,
                params: params.to_map(),
                tie_convention: TIE_CONVENTION.into(),
                config_fingerprint: fingerprint.clone(),
            })
        })
        .collect()
}
