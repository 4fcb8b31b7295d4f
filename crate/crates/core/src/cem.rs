//! Closeness Information Quantity and the Closeness Evaluation Measure.
//!
//! The closeness of a system class `a` to a gold class `b` is the
//! information quantity `-log2 P(x closer to b than a)` of drawing a gold
//! item `x` that lies at least as close to `b` as `a` does. What "closer"
//! means depends on the measurement scale:
//!
//! * ordinal: `x` lies between `a` and `b` (inclusive),
//! * nominal: `x == b`, or any `x` when `a != b`,
//! * interval: `|v(x) - v(b)| <= |v(a) - v(b)|` over numeric class values.
//!
//! Items tied with the boundary count half: at ordinal scale the boundary is
//! the system class `a`, at nominal scale the self class, and at interval
//! scale every class at exactly distance `|v(a) - v(b)|` from `b`.
//!
//! CEM sums the quantity over items and divides by the sum a perfect system
//! would get.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataset::{GoldDistribution, LabeledDataset};
use crate::error::{Error, Result};
use crate::scale::ordinal_positions;

/// Measurement scale at which closeness is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleType {
    Ord,
    Nom,
    Int,
}

/// What CEM does when the gold standard leaves a class of the scale empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmptyClassPolicy {
    /// Refuse with [`Error::EmptyGoldClass`]; the ordinal guarantees only hold
    /// for fully populated gold standards.
    #[default]
    Reject,
    /// Score anyway. Empty classes contribute no mass, and every cell a
    /// gold item can hit stays finite.
    Allow,
}

/// `prox(c_i, c_j)` for every pair of system class `i` and gold class `j`,
/// derived from one gold distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityTable {
    distribution: GoldDistribution,
    probability: Vec<f64>,
    prox: Vec<f64>,
}

impl ProximityTable {
    /// Cells whose mass is zero (only possible next to empty classes) hold
    /// `+inf`.
    pub fn build(distribution: &GoldDistribution) -> Result<Self> {
        let n = distribution.counts();
        let k = n.len();
        if distribution.total() == 0 {
            return Err(Error::EmptyDistribution);
        }
        // prefix[i] = n_0 + ... + n_{i-1}
        let mut prefix = vec![0u64; k + 1];
        for i in 0..k {
            prefix[i + 1] = prefix[i] + n[i];
        }
        let twice_total = 2 * distribution.total();
        let mut probability = vec![0.0; k * k];
        let mut prox = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                // twice the mass: the system class counts half, the gold
                // class and everything strictly between count fully
                let twice_mass = if i == j {
                    n[i]
                } else {
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    let between = prefix[hi] - prefix[lo + 1];
                    n[i] + 2 * (between + n[j])
                };
                let p = twice_mass as f64 / twice_total as f64;
                probability[i * k + j] = p;
                prox[i * k + j] = -libm::log2(p);
            }
        }
        Ok(Self {
            distribution: distribution.clone(),
            probability,
            prox,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.distribution.num_classes()
    }

    pub fn distribution(&self) -> &GoldDistribution {
        &self.distribution
    }

    /// Informational proximity of system class `system` to gold class `gold`.
    pub fn prox(&self, system: usize, gold: usize) -> f64 {
        self.prox[system * self.num_classes() + gold]
    }

    /// Probability of the ordinal closeness event behind [`Self::prox`].
    pub fn probability(&self, system: usize, gold: usize) -> f64 {
        self.probability[system * self.num_classes() + gold]
    }

    pub fn is_finite(&self, system: usize, gold: usize) -> bool {
        self.prox(system, gold).is_finite()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.prox.chunks(self.num_classes())
    }
}

/// Weight (0, 1/2 or 1) with which gold class `x` enters the event
/// "closer to `b` than `a`" at the given scale.
pub fn closeness_weight(scale_type: ScaleType, values: &[f64], a: usize, b: usize, x: usize) -> f64 {
    match scale_type {
        ScaleType::Ord => {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if x == a {
                0.5
            } else if lo <= x && x <= hi {
                1.0
            } else {
                0.0
            }
        }
        ScaleType::Nom => {
            if a != b {
                1.0
            } else if x == b {
                0.5
            } else {
                0.0
            }
        }
        ScaleType::Int => {
            let radius = libm::fabs(values[a] - values[b]);
            let distance = libm::fabs(values[x] - values[b]);
            if distance < radius {
                1.0
            } else if distance == radius {
                0.5
            } else {
                0.0
            }
        }
    }
}

/// Probability that a gold item is closer to `b` than `a` is.
pub fn closeness_probability(
    scale_type: ScaleType,
    distribution: &GoldDistribution,
    values: &[f64],
    a: usize,
    b: usize,
) -> f64 {
    let mass: f64 = distribution
        .counts()
        .iter()
        .enumerate()
        .map(|(x, &n)| closeness_weight(scale_type, values, a, b, x) * n as f64)
        .sum();
    mass / distribution.total() as f64
}

/// Closeness information quantity of system class `a` with respect to gold
/// class `b`, using class positions as numeric values at interval scale.
pub fn ciq(scale_type: ScaleType, distribution: &GoldDistribution, a: usize, b: usize) -> Result<f64> {
    let values = ordinal_positions(distribution.num_classes());
    ciq_with_values(scale_type, distribution, &values, a, b)
}

pub fn ciq_with_values(
    scale_type: ScaleType,
    distribution: &GoldDistribution,
    values: &[f64],
    a: usize,
    b: usize,
) -> Result<f64> {
    let k = distribution.num_classes();
    for c in [a, b] {
        if c >= k {
            return Err(Error::ClassOutOfRange { index: c, len: k });
        }
    }
    if values.len() != k {
        return Err(Error::InvalidConfig(alloc::format!(
            "{} class values for {k} classes",
            values.len()
        )));
    }
    let p = closeness_probability(scale_type, distribution, values, a, b);
    if p <= 0.0 {
        return Err(Error::UndefinedCiq);
    }
    Ok(-libm::log2(p))
}

/// CEM of `system` against the dataset's gold standard, with the default
/// numeric embedding for the interval scale and strict empty-class handling.
pub fn cem(scale_type: ScaleType, dataset: &LabeledDataset, system: &str) -> Result<f64> {
    let predicted = dataset.system(system)?;
    let values = ordinal_positions(dataset.scale().len());
    cem_labels(scale_type, dataset.gold(), predicted, &values, EmptyClassPolicy::Reject)
}

/// Non-logarithmic ablation of ordinal CEM: each pair weighs `1 - P(event)`.
pub fn cem_flat(dataset: &LabeledDataset, system: &str) -> Result<f64> {
    let predicted = dataset.system(system)?;
    cem_flat_labels(dataset.gold(), predicted, dataset.scale().len(), EmptyClassPolicy::Reject)
}

/// CEM over class-index sequences. `values` gives the numeric class
/// embedding (used at interval scale only) and fixes the number of classes.
pub fn cem_labels(
    scale_type: ScaleType,
    gold: &[usize],
    system: &[usize],
    values: &[f64],
    policy: EmptyClassPolicy,
) -> Result<f64> {
    let k = values.len();
    let distribution = GoldDistribution::from_labels(gold, k)?;
    match scale_type {
        ScaleType::Ord => {
            check_populated(&distribution, policy)?;
            let table = ProximityTable::build(&distribution)?;
            cem_ord_with_table(&table, gold, system)
        }
        ScaleType::Nom | ScaleType::Int => {
            let table = ciq_table(scale_type, &distribution, values);
            weighted_ratio(gold, system, |s, g| table[s * k + g])
        }
    }
}

/// Ordinal CEM against a precomputed table; lets one table serve many systems.
pub fn cem_ord_with_table(table: &ProximityTable, gold: &[usize], system: &[usize]) -> Result<f64> {
    weighted_ratio(gold, system, |s, g| table.prox(s, g))
}

pub fn cem_flat_labels(
    gold: &[usize],
    system: &[usize],
    num_classes: usize,
    policy: EmptyClassPolicy,
) -> Result<f64> {
    let distribution = GoldDistribution::from_labels(gold, num_classes)?;
    check_populated(&distribution, policy)?;
    let table = ProximityTable::build(&distribution)?;
    cem_flat_with_table(&table, gold, system)
}

pub fn cem_flat_with_table(table: &ProximityTable, gold: &[usize], system: &[usize]) -> Result<f64> {
    weighted_ratio(gold, system, |s, g| 1.0 - table.probability(s, g))
}

fn check_populated(distribution: &GoldDistribution, policy: EmptyClassPolicy) -> Result<()> {
    match (policy, distribution.first_empty_class()) {
        (EmptyClassPolicy::Reject, Some(index)) => Err(Error::EmptyGoldClass { index }),
        _ => Ok(()),
    }
}

fn ciq_table(scale_type: ScaleType, distribution: &GoldDistribution, values: &[f64]) -> Vec<f64> {
    let k = distribution.num_classes();
    let mut table = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            let p = closeness_probability(scale_type, distribution, values, a, b);
            table[a * k + b] = -libm::log2(p);
        }
    }
    table
}

fn weighted_ratio(gold: &[usize], system: &[usize], weight: impl Fn(usize, usize) -> f64) -> Result<f64> {
    if gold.len() != system.len() {
        return Err(Error::LengthMismatch {
            system: "system".into(),
            expected: gold.len(),
            got: system.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut achieved = 0.0;
    let mut perfect = 0.0;
    for (&g, &s) in gold.iter().zip(system) {
        let w = weight(s, g);
        if !w.is_finite() {
            return Err(Error::UndefinedCiq);
        }
        achieved += w;
        perfect += weight(g, g);
    }
    if perfect <= 0.0 {
        return Err(Error::DegenerateInput("perfect-match closeness sum is zero"));
    }
    Ok(achieved / perfect)
}
