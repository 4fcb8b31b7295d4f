//! Comparison metrics: classification, value-prediction, correlation and
//! clustering measures.
//!
//! Every function takes gold and system class indices plus the numeric class
//! values. Only the value-based metrics read `values`; the rest depend on
//! class identity or class order alone. Error metrics return the raw
//! (positive) error; the registry negates them.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::stats;

/// Gold and system class indices with the numeric embedding of the classes.
#[derive(Debug, Clone, Copy)]
pub struct Labels<'a> {
    pub gold: &'a [usize],
    pub system: &'a [usize],
    pub values: &'a [f64],
}

impl<'a> Labels<'a> {
    pub fn new(gold: &'a [usize], system: &'a [usize], values: &'a [f64]) -> Result<Self> {
        if gold.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if gold.len() != system.len() {
            return Err(Error::LengthMismatch {
                system: "system".into(),
                expected: gold.len(),
                got: system.len(),
            });
        }
        let k = values.len();
        if let Some(&index) = gold.iter().chain(system).find(|&&c| c >= k) {
            return Err(Error::ClassOutOfRange { index, len: k });
        }
        Ok(Self { gold, system, values })
    }

    pub fn len(&self) -> usize {
        self.gold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gold.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.values.len()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.gold.iter().copied().zip(self.system.iter().copied())
    }

    fn confusion(&self) -> ConfusionMatrix {
        ConfusionMatrix::from_labels(self.gold, self.system, self.num_classes())
    }

    fn numeric(&self) -> (Vec<f64>, Vec<f64>) {
        let g = self.gold.iter().map(|&c| self.values[c]).collect();
        let s = self.system.iter().map(|&c| self.values[c]).collect();
        (g, s)
    }
}

pub fn accuracy(l: &Labels) -> f64 {
    l.pairs().filter(|(g, s)| g == s).count() as f64 / l.len() as f64
}

/// Fraction of items whose predicted class is at most `n` positions away
/// from the gold class.
pub fn accuracy_within(l: &Labels, n: u32) -> f64 {
    l.pairs().filter(|&(g, s)| g.abs_diff(s) <= n as usize).count() as f64 / l.len() as f64
}

/// Macro-averaged accuracy: mean per-class recall over populated gold classes.
pub fn macro_accuracy(l: &Labels) -> f64 {
    let m = l.confusion();
    let gold_counts = m.column_sums();
    let recalls: Vec<f64> = (0..l.num_classes())
        .filter(|&c| gold_counts[c] > 0)
        .map(|c| m.cell(c, c) as f64 / gold_counts[c] as f64)
        .collect();
    stats::mean(&recalls)
}

/// F1 averaged over classes present in gold or system output.
pub fn macro_f1(l: &Labels) -> f64 {
    let m = l.confusion();
    let gold_counts = m.column_sums();
    let system_counts = m.row_sums();
    let scores: Vec<f64> = (0..l.num_classes())
        .filter(|&c| gold_counts[c] + system_counts[c] > 0)
        .map(|c| 2.0 * m.cell(c, c) as f64 / (gold_counts[c] + system_counts[c]) as f64)
        .collect();
    stats::mean(&scores)
}

pub fn cohen_kappa(l: &Labels) -> Result<f64> {
    let k = l.num_classes();
    weighted_kappa_with(l, |i, j| if i == j { 1.0 } else { 0.0 }, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaWeights {
    Linear,
    Quadratic,
}

/// Weighted kappa with agreement weights `1 - d` (linear) or `1 - d^2`
/// (quadratic), `d` being the value distance scaled to `[0, 1]`.
pub fn weighted_kappa(l: &Labels, scheme: KappaWeights) -> Result<f64> {
    let v = l.values;
    let span = v[v.len() - 1] - v[0];
    let weight = |i: usize, j: usize| {
        let d = libm::fabs(v[i] - v[j]) / span;
        match scheme {
            KappaWeights::Linear => 1.0 - d,
            KappaWeights::Quadratic => 1.0 - d * d,
        }
    };
    weighted_kappa_with(l, weight, l.num_classes())
}

fn weighted_kappa_with(l: &Labels, weight: impl Fn(usize, usize) -> f64, k: usize) -> Result<f64> {
    let m = l.confusion();
    let n = l.len() as f64;
    let gold = m.column_sums();
    let system = m.row_sums();
    let (mut observed, mut expected) = (0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let w = weight(i, j);
            observed += w * m.cell(i, j) as f64 / n;
            expected += w * (system[i] as f64 / n) * (gold[j] as f64 / n);
        }
    }
    let denominator = 1.0 - expected;
    if denominator.abs() < 1e-15 {
        return Err(Error::DegenerateInput("chance agreement is 1, kappa undefined"));
    }
    Ok((observed - expected) / denominator)
}

pub fn mean_absolute_error(l: &Labels) -> f64 {
    let v = l.values;
    l.pairs().map(|(g, s)| libm::fabs(v[g] - v[s])).sum::<f64>() / l.len() as f64
}

pub fn mean_squared_error(l: &Labels) -> f64 {
    let v = l.values;
    l.pairs().map(|(g, s)| (v[g] - v[s]) * (v[g] - v[s])).sum::<f64>() / l.len() as f64
}

/// Unweighted mean over populated gold classes of the per-class mean of
/// `loss(gold value, system value)`.
fn macro_error(l: &Labels, loss: impl Fn(f64, f64) -> f64) -> f64 {
    let k = l.num_classes();
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (g, s) in l.pairs() {
        sums[g] += loss(l.values[g], l.values[s]);
        counts[g] += 1;
    }
    let per_class: Vec<f64> = (0..k)
        .filter(|&c| counts[c] > 0)
        .map(|c| sums[c] / counts[c] as f64)
        .collect();
    stats::mean(&per_class)
}

pub fn macro_mean_absolute_error(l: &Labels) -> f64 {
    macro_error(l, |g, s| libm::fabs(g - s))
}

pub fn macro_mean_squared_error(l: &Labels) -> f64 {
    macro_error(l, |g, s| (g - s) * (g - s))
}

pub fn pearson(l: &Labels) -> Result<f64> {
    let (g, s) = l.numeric();
    stats::pearson(&g, &s).ok_or(Error::DegenerateInput("zero variance in Pearson input"))
}

pub fn spearman(l: &Labels) -> Result<f64> {
    let g: Vec<f64> = l.gold.iter().map(|&c| c as f64).collect();
    let s: Vec<f64> = l.system.iter().map(|&c| c as f64).collect();
    stats::spearman(&g, &s).ok_or(Error::DegenerateInput("constant ranking in Spearman input"))
}

struct PairCounts {
    concordant: u64,
    discordant: u64,
    tied_gold: u64,
    tied_system: u64,
    total: u64,
}

fn pair_counts(l: &Labels) -> PairCounts {
    let n = l.len();
    let mut c = PairCounts {
        concordant: 0,
        discordant: 0,
        tied_gold: 0,
        tied_system: 0,
        total: (n as u64) * (n as u64 - 1) / 2,
    };
    for i in 0..n {
        for j in i + 1..n {
            let dg = l.gold[i].cmp(&l.gold[j]);
            let ds = l.system[i].cmp(&l.system[j]);
            use core::cmp::Ordering::Equal;
            if dg == Equal {
                c.tied_gold += 1;
            }
            if ds == Equal {
                c.tied_system += 1;
            }
            if dg != Equal && ds != Equal {
                if dg == ds {
                    c.concordant += 1;
                } else {
                    c.discordant += 1;
                }
            }
        }
    }
    c
}

/// `(C - D) / (n (n - 1) / 2)`: tied pairs count in the denominator only.
pub fn kendall_tau_a(l: &Labels) -> Result<f64> {
    if l.len() < 2 {
        return Err(Error::DegenerateInput("Kendall tau needs at least two items"));
    }
    let c = pair_counts(l);
    Ok((c.concordant as f64 - c.discordant as f64) / c.total as f64)
}

/// Tie-corrected Kendall tau.
pub fn kendall_tau_b(l: &Labels) -> Result<f64> {
    if l.len() < 2 {
        return Err(Error::DegenerateInput("Kendall tau needs at least two items"));
    }
    let c = pair_counts(l);
    let denominator = ((c.total - c.tied_gold) as f64) * ((c.total - c.tied_system) as f64);
    if denominator == 0.0 {
        return Err(Error::DegenerateInput("constant ranking in Kendall tau-b input"));
    }
    Ok((c.concordant as f64 - c.discordant as f64) / libm::sqrt(denominator))
}

/// Mutual information between gold and system labels, in bits.
pub fn mutual_information(l: &Labels) -> f64 {
    let m = l.confusion();
    let n = l.len() as f64;
    let gold = m.column_sums();
    let system = m.row_sums();
    let mut mi = 0.0;
    for (i, row) in m.rows().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let joint = count as f64 / n;
            mi += joint * libm::log2(joint * n * n / (system[i] as f64 * gold[j] as f64));
        }
    }
    mi
}

/// System classes as clusters: fraction of items in the majority gold class
/// of their cluster.
pub fn purity(l: &Labels) -> f64 {
    let m = l.confusion();
    m.rows().map(|r| r.iter().copied().max().unwrap_or(0)).sum::<u64>() as f64 / l.len() as f64
}

/// Gold classes as categories: fraction of items in the cluster that best
/// covers their category.
pub fn inverse_purity(l: &Labels) -> f64 {
    let m = l.confusion();
    let k = l.num_classes();
    (0..k)
        .map(|j| (0..k).map(|i| m.cell(i, j)).max().unwrap_or(0))
        .sum::<u64>() as f64
        / l.len() as f64
}

/// Cosine between the vectors of gold and predicted class values, one
/// dimension per item.
pub fn cosine(l: &Labels) -> Result<f64> {
    let (g, s) = l.numeric();
    let dot: f64 = g.iter().zip(&s).map(|(a, b)| a * b).sum();
    let gg: f64 = g.iter().map(|a| a * a).sum();
    let ss: f64 = s.iter().map(|a| a * a).sum();
    if gg == 0.0 || ss == 0.0 {
        return Err(Error::DegenerateInput("zero vector in cosine input"));
    }
    Ok(dot / libm::sqrt(gg * ss))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ordinal_positions;

    fn labels<'a>(gold: &'a [usize], system: &'a [usize], values: &'a [f64]) -> Labels<'a> {
        Labels::new(gold, system, values).unwrap()
    }

    #[test]
    fn kappa_perfect_and_degenerate() {
        let v = ordinal_positions(3);
        let g = [0, 1, 2, 1];
        assert_eq!(cohen_kappa(&labels(&g, &g, &v)).unwrap(), 1.0);
        let constant = [1, 1, 1];
        assert!(matches!(
            cohen_kappa(&labels(&constant, &constant, &v)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn linear_weighted_kappa_equals_kappa_on_two_classes() {
        let v = ordinal_positions(2);
        let g = [0, 0, 1, 1, 1, 0, 1];
        let s = [0, 1, 1, 0, 1, 0, 0];
        let l = labels(&g, &s, &v);
        let k = cohen_kappa(&l).unwrap();
        assert!((weighted_kappa(&l, KappaWeights::Linear).unwrap() - k).abs() < 1e-12);
        assert!((weighted_kappa(&l, KappaWeights::Quadratic).unwrap() - k).abs() < 1e-12);
    }

    #[test]
    fn tau_a_equals_tau_b_without_ties() {
        let v = ordinal_positions(6);
        let g = [0, 3, 1, 5, 2];
        let s = [1, 2, 0, 5, 4];
        let l = labels(&g, &s, &v);
        assert!((kendall_tau_a(&l).unwrap() - kendall_tau_b(&l).unwrap()).abs() < 1e-12);
        let gs = [0, 1, 2, 3, 4];
        assert_eq!(kendall_tau_a(&labels(&gs, &gs, &v)).unwrap(), 1.0);
    }

    #[test]
    fn mutual_information_of_identity_is_gold_entropy() {
        let v = ordinal_positions(3);
        let g = [0, 0, 1, 2];
        let mi = mutual_information(&labels(&g, &g, &v));
        // H = 1/2 * 1 + 2 * 1/4 * 2
        assert!((mi - 1.5).abs() < 1e-12);
        let constant = [1, 1, 1, 1];
        assert_eq!(mutual_information(&labels(&g, &constant, &v)), 0.0);
    }

    #[test]
    fn macro_f1_skips_absent_classes() {
        let v = ordinal_positions(4);
        let g = [0, 0, 1];
        let s = [0, 1, 1];
        // class 0: 2*1/3, class 1: 2*1/3, classes 2 and 3 absent
        assert!((macro_f1(&labels(&g, &s, &v)) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn purity_and_inverse_purity() {
        let v = ordinal_positions(3);
        let g = [0, 0, 1, 1, 2];
        let s = [0, 0, 0, 1, 1];
        // clusters: {0,0,1} -> 2, {1,2} -> 1
        assert!((purity(&labels(&g, &s, &v)) - 3.0 / 5.0).abs() < 1e-12);
        // categories: 0 -> 2, 1 -> 1, 2 -> 1
        assert!((inverse_purity(&labels(&g, &s, &v)) - 4.0 / 5.0).abs() < 1e-12);
    }
}
