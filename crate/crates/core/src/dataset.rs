//! Labeled datasets, gold distributions and confusion matrices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scale::OrdinalScale;

/// Items with gold labels and any number of aligned system outputs.
///
/// Labels are stored as class indices into `scale`. A dataset is built once
/// (gold first, then systems) and is read-only afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    scale: OrdinalScale,
    item_ids: Vec<String>,
    gold: Vec<usize>,
    systems: BTreeMap<String, Vec<usize>>,
}

impl LabeledDataset {
    /// Builds a dataset from `(item_id, gold label)` rows. Row order defines
    /// item order.
    pub fn new<I, A, B>(scale: OrdinalScale, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: AsRef<str>,
    {
        let mut item_ids = Vec::new();
        let mut gold = Vec::new();
        for (id, label) in rows {
            item_ids.push(id.into());
            gold.push(scale.require_index(label.as_ref())?);
        }
        Self::from_indices(scale, item_ids, gold)
    }

    pub fn from_indices(scale: OrdinalScale, item_ids: Vec<String>, gold: Vec<usize>) -> Result<Self> {
        if item_ids.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if item_ids.len() != gold.len() {
            return Err(Error::LengthMismatch {
                system: "gold".into(),
                expected: item_ids.len(),
                got: gold.len(),
            });
        }
        check_indices(&gold, scale.len())?;
        let mut seen = BTreeSet::new();
        for id in &item_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateItem(id.clone()));
            }
        }
        Ok(Self {
            scale,
            item_ids,
            gold,
            systems: BTreeMap::new(),
        })
    }

    /// Gold standard with synthetic item ids `d0, d1, ...`.
    pub fn from_gold_indices(scale: OrdinalScale, gold: Vec<usize>) -> Result<Self> {
        let ids = (0..gold.len()).map(|i| alloc::format!("d{i}")).collect();
        Self::from_indices(scale, ids, gold)
    }

    /// Adds a system given as `(item_id, label)` rows in any order.
    /// Every gold item must be covered exactly once.
    pub fn with_system<I, A, B>(mut self, name: impl Into<String>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let name = name.into();
        if self.systems.contains_key(&name) {
            return Err(Error::DuplicateSystem(name));
        }
        let position: BTreeMap<&str, usize> = self
            .item_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut predicted: Vec<Option<usize>> = vec![None; self.item_ids.len()];
        for (id, label) in rows {
            let id = id.as_ref();
            let pos = *position.get(id).ok_or_else(|| Error::UnexpectedItem {
                item: id.to_string(),
                system: name.clone(),
            })?;
            if predicted[pos].is_some() {
                return Err(Error::DuplicateItem(id.to_string()));
            }
            predicted[pos] = Some(self.scale.require_index(label.as_ref())?);
        }
        let mut labels = Vec::with_capacity(predicted.len());
        for (pos, p) in predicted.into_iter().enumerate() {
            match p {
                Some(c) => labels.push(c),
                None => {
                    return Err(Error::MissingItem {
                        item: self.item_ids[pos].clone(),
                        system: name,
                    })
                }
            }
        }
        self.systems.insert(name, labels);
        Ok(self)
    }

    /// Adds a system given as class indices aligned with the item order.
    pub fn with_system_indices(mut self, name: impl Into<String>, labels: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if self.systems.contains_key(&name) {
            return Err(Error::DuplicateSystem(name));
        }
        if labels.len() != self.gold.len() {
            return Err(Error::LengthMismatch {
                system: name,
                expected: self.gold.len(),
                got: labels.len(),
            });
        }
        check_indices(&labels, self.scale.len())?;
        self.systems.insert(name, labels);
        Ok(self)
    }

    pub fn scale(&self) -> &OrdinalScale {
        &self.scale
    }

    pub fn len(&self) -> usize {
        self.gold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gold.is_empty()
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn gold(&self) -> &[usize] {
        &self.gold
    }

    pub fn system(&self, name: &str) -> Result<&[usize]> {
        self.systems
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    pub fn system_names(&self) -> impl Iterator<Item = &str> {
        self.systems.keys().map(String::as_str)
    }

    pub fn gold_distribution(&self) -> GoldDistribution {
        GoldDistribution::from_labels(&self.gold, self.scale.len())
            .expect("dataset is nonempty by construction")
    }

    pub fn confusion_matrix(&self, system: &str) -> Result<ConfusionMatrix> {
        let predicted = self.system(system)?;
        Ok(ConfusionMatrix::from_labels(&self.gold, predicted, self.scale.len()))
    }
}

fn check_indices(labels: &[usize], len: usize) -> Result<()> {
    match labels.iter().find(|&&c| c >= len) {
        Some(&index) => Err(Error::ClassOutOfRange { index, len }),
        None => Ok(()),
    }
}

/// Per-class gold counts `n_i` and their total `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldDistribution {
    counts: Vec<u64>,
    total: u64,
}

impl GoldDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self { counts, total })
    }

    pub fn from_labels(gold: &[usize], num_classes: usize) -> Result<Self> {
        let mut counts = vec![0u64; num_classes];
        for &g in gold {
            *counts
                .get_mut(g)
                .ok_or(Error::ClassOutOfRange { index: g, len: num_classes })? += 1;
        }
        Self::from_counts(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, class: usize) -> u64 {
        self.counts[class]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    /// Index of the lowest empty class, if any.
    pub fn first_empty_class(&self) -> Option<usize> {
        self.counts.iter().position(|&n| n == 0)
    }

    pub fn is_uniform(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

/// `cell(i, j)` counts items the system put in class `i` whose gold class is `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    num_classes: usize,
    cells: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn from_labels(gold: &[usize], system: &[usize], num_classes: usize) -> Self {
        debug_assert_eq!(gold.len(), system.len());
        let mut cells = vec![0u64; num_classes * num_classes];
        for (&g, &s) in gold.iter().zip(system) {
            cells[s * num_classes + g] += 1;
        }
        Self { num_classes, cells }
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn cell(&self, system_class: usize, gold_class: usize) -> u64 {
        self.cells[system_class * self.num_classes + gold_class]
    }

    pub fn row(&self, system_class: usize) -> &[u64] {
        let k = self.num_classes;
        &self.cells[system_class * k..(system_class + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.num_classes)
    }

    /// Per-gold-class totals; equal to the gold distribution counts.
    pub fn column_sums(&self) -> Vec<u64> {
        let k = self.num_classes;
        (0..k).map(|j| (0..k).map(|i| self.cell(i, j)).sum()).collect()
    }

    /// Per-system-class totals.
    pub fn row_sums(&self) -> Vec<u64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes).map(|i| self.cell(i, i)).sum()
    }
}
