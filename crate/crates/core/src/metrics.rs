//! Metric registry: one identifier, one scoring function, one orientation.
//!
//! Every registered score is higher-is-better; error metrics (MAE, MSE and
//! their macro-averaged variants) are negated on registration.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{self, KappaWeights, Labels};
use crate::cem::{self, EmptyClassPolicy, ScaleType};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::scale::ordinal_positions;

macro_rules! metric_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum MetricId {
            $($variant),*
        }

        impl MetricId {
            /// Every registered metric, in registry order.
            pub const ALL: &'static [MetricId] = &[$(MetricId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(MetricId::$variant => $name),*
                }
            }
        }
    };
}

metric_ids! {
    Accuracy => "accuracy",
    AccWithinN => "acc_within_n",
    Maac => "maac",
    MacroF1 => "macro_f1",
    CohenKappa => "cohen_kappa",
    WeightedKappaLinear => "weighted_kappa_linear",
    WeightedKappaQuadratic => "weighted_kappa_quadratic",
    Mae => "mae",
    Mse => "mse",
    MacroMae => "macro_mae",
    MacroMse => "macro_mse",
    Pearson => "pearson",
    Spearman => "spearman",
    KendallTauA => "kendall_tau_a",
    KendallTauB => "kendall_tau_b",
    MutualInformation => "mutual_information",
    Purity => "purity",
    InversePurity => "inverse_purity",
    Cosine => "cosine",
    CemOrd => "cem_ord",
    CemNom => "cem_nom",
    CemInt => "cem_int",
    CemFlat => "cem_flat",
}

impl MetricId {
    /// Error metrics are registered with their sign flipped.
    pub fn negated(self) -> bool {
        matches!(
            self,
            MetricId::Mae | MetricId::Mse | MetricId::MacroMae | MetricId::MacroMse
        )
    }

    /// Whether the score reads numeric class values rather than class
    /// identity or order alone.
    pub fn uses_class_values(self) -> bool {
        matches!(
            self,
            MetricId::Mae
                | MetricId::Mse
                | MetricId::MacroMae
                | MetricId::MacroMse
                | MetricId::Pearson
                | MetricId::Cosine
                | MetricId::CemInt
                | MetricId::WeightedKappaLinear
                | MetricId::WeightedKappaQuadratic
        )
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            MetricId::AccWithinN => &[ParamSpec {
                key: "n",
                description: "maximum class distance counted as correct",
                default: "1",
            }],
            MetricId::CemOrd | MetricId::CemFlat => &[ParamSpec {
                key: "empty_classes",
                description: "reject | allow scoring against gold standards with empty classes",
                default: "reject",
            }],
            _ => &[],
        }
    }

    /// Parses a metric id, also accepting the short aliases `acc`,
    /// `kendall_a` and `mi`.
    pub fn parse(s: &str) -> Result<Self> {
        let canonical = match s {
            "acc" => "accuracy",
            "kendall_a" | "kendall" => "kendall_tau_a",
            "kendall_b" => "kendall_tau_b",
            "mi" => "mutual_information",
            other => other,
        };
        MetricId::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == canonical)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricId::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub key: &'static str,
    pub description: &'static str,
    pub default: &'static str,
}

/// Optional metric parameters. Keys irrelevant to a metric are ignored by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricParams {
    /// Tolerance of `acc_within_n`.
    pub n: u32,
    /// Empty-gold-class handling of `cem_ord` and `cem_flat`.
    pub empty_classes: EmptyClassPolicy,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            n: 1,
            empty_classes: EmptyClassPolicy::Reject,
        }
    }
}

impl MetricParams {
    /// Parses `key=value` settings on top of the defaults.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut params = Self::default();
        for (key, value) in pairs {
            params.set(key, value)?;
        }
        Ok(params)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => {
                self.n = value
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("n must be a non-negative integer, got `{value}`")))?
            }
            "empty_classes" => {
                self.empty_classes = match value {
                    "reject" => EmptyClassPolicy::Reject,
                    "allow" => EmptyClassPolicy::Allow,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "empty_classes must be `reject` or `allow`, got `{value}`"
                        )))
                    }
                }
            }
            _ => return Err(Error::InvalidParameter(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("n".into(), self.n.to_string());
        let policy = match self.empty_classes {
            EmptyClassPolicy::Reject => "reject",
            EmptyClassPolicy::Allow => "allow",
        };
        map.insert("empty_classes".into(), policy.into());
        map
    }
}

/// Registry entry as reported by [`list_metrics`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricInfo {
    pub id: MetricId,
    /// Always true: registered scores are higher-is-better.
    pub higher_is_better: bool,
    pub negated: bool,
    pub uses_class_values: bool,
    pub params: &'static [ParamSpec],
}

pub fn list_metrics() -> Vec<MetricInfo> {
    MetricId::ALL
        .iter()
        .map(|&id| MetricInfo {
            id,
            higher_is_better: true,
            negated: id.negated(),
            uses_class_values: id.uses_class_values(),
            params: id.params(),
        })
        .collect()
}

/// SHA-256 over the registry (ids, orientations, parameter schemas).
pub fn registry_fingerprint() -> String {
    let mut hasher = Sha256::new();
    for info in list_metrics() {
        hasher.update(info.id.as_str().as_bytes());
        hasher.update([info.negated as u8, info.uses_class_values as u8]);
        for p in info.params {
            hasher.update(p.key.as_bytes());
            hasher.update(p.default.as_bytes());
        }
        hasher.update(b";");
    }
    hex(&hasher.finalize())
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    use core::fmt::Write;
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Registered (higher-is-better) score of a labeled system output.
pub fn score_labels(metric: MetricId, labels: &Labels, params: &MetricParams) -> Result<f64> {
    let raw = match metric {
        MetricId::Accuracy => baselines::accuracy(labels),
        MetricId::AccWithinN => baselines::accuracy_within(labels, params.n),
        MetricId::Maac => baselines::macro_accuracy(labels),
        MetricId::MacroF1 => baselines::macro_f1(labels),
        MetricId::CohenKappa => baselines::cohen_kappa(labels)?,
        MetricId::WeightedKappaLinear => baselines::weighted_kappa(labels, KappaWeights::Linear)?,
        MetricId::WeightedKappaQuadratic => baselines::weighted_kappa(labels, KappaWeights::Quadratic)?,
        MetricId::Mae => baselines::mean_absolute_error(labels),
        MetricId::Mse => baselines::mean_squared_error(labels),
        MetricId::MacroMae => baselines::macro_mean_absolute_error(labels),
        MetricId::MacroMse => baselines::macro_mean_squared_error(labels),
        MetricId::Pearson => baselines::pearson(labels)?,
        MetricId::Spearman => baselines::spearman(labels)?,
        MetricId::KendallTauA => baselines::kendall_tau_a(labels)?,
        MetricId::KendallTauB => baselines::kendall_tau_b(labels)?,
        MetricId::MutualInformation => baselines::mutual_information(labels),
        MetricId::Purity => baselines::purity(labels),
        MetricId::InversePurity => baselines::inverse_purity(labels),
        MetricId::Cosine => baselines::cosine(labels)?,
        MetricId::CemOrd => cem::cem_labels(
            ScaleType::Ord,
            labels.gold,
            labels.system,
            labels.values,
            params.empty_classes,
        )?,
        MetricId::CemNom => {
            cem::cem_labels(ScaleType::Nom, labels.gold, labels.system, labels.values, params.empty_classes)?
        }
        MetricId::CemInt => {
            cem::cem_labels(ScaleType::Int, labels.gold, labels.system, labels.values, params.empty_classes)?
        }
        MetricId::CemFlat => cem::cem_flat_labels(
            labels.gold,
            labels.system,
            labels.num_classes(),
            params.empty_classes,
        )?,
    };
    Ok(if metric.negated() { -raw } else { raw })
}

/// Registered score of `system` on `dataset`, using class positions
/// `1..=C` as numeric class values.
pub fn score(metric: MetricId, dataset: &LabeledDataset, system: &str, params: &MetricParams) -> Result<f64> {
    let predicted = dataset.system(system)?;
    let values = ordinal_positions(dataset.scale().len());
    let labels = Labels::new(dataset.gold(), predicted, &values)?;
    score_labels(metric, &labels, params)
}
