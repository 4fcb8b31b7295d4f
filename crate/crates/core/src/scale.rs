//! Ordered class labels.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered set of class labels, lowest first.
///
/// Labels are opaque: their order in the scale is the only ordinal
/// information any metric sees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct OrdinalScale {
    classes: Vec<String>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl OrdinalScale {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let classes: Vec<String> = labels.into_iter().map(Into::into).collect();
        if classes.len() < 2 {
            return Err(Error::ScaleTooSmall(classes.len()));
        }
        let mut index = BTreeMap::new();
        for (i, label) in classes.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateClass(label.clone()));
            }
        }
        Ok(Self { classes, index })
    }

    /// Scale `"1" < "2" < ... < "n"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.classes.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require_index(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
        })
    }

    /// Scale whose labels are renamed by `rename`, keeping the order.
    pub fn relabel(&self, mut rename: impl FnMut(usize, &str) -> String) -> Result<Self> {
        Self::new(
            self.classes
                .iter()
                .enumerate()
                .map(|(i, c)| rename(i, c)),
        )
    }
}

impl TryFrom<Vec<String>> for OrdinalScale {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<OrdinalScale> for Vec<String> {
    fn from(scale: OrdinalScale) -> Self {
        scale.classes
    }
}

impl core::fmt::Display for OrdinalScale {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.classes.join(","))
    }
}

/// Numeric values assigned to classes by metrics that consume numbers
/// (MAE, Pearson, cosine, interval-scale CEM, weighted kappa).
///
/// The default embedding puts class `i` (0-based) at `i + 1`. Order-preserving
/// transforms in the property audit replace this vector.
pub fn ordinal_positions(num_classes: usize) -> Vec<f64> {
    (1..=num_classes).map(|v| v as f64).collect()
}

/// Checks that `values` is strictly increasing, i.e. a valid numeric
/// embedding of an ordinal scale.
pub fn check_values(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::ScaleTooSmall(values.len()));
    }
    for w in values.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::InvalidConfig(format!(
                "class values must be finite and strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}
