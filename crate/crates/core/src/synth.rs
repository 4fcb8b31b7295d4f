//! Synthetic benchmark: clamped-normal gold standards and five families of
//! noisy system outputs.
//!
//! Labels are class indices `0..num_classes`; class `i` is printed as
//! `i + 1`. Every case and every system draws from its own derived stream,
//! so cases can be generated in any order and adding a system family or a
//! ratio leaves the other outputs untouched.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub test_cases: usize,
    pub docs_per_case: usize,
    pub num_classes: usize,
    pub gold_mean: f64,
    pub sigma_range: [f64; 2],
    pub error_ratios: Vec<f64>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            test_cases: 100,
            docs_per_case: 200,
            num_classes: 11,
            gold_mean: 4.0,
            sigma_range: [1.0, 3.0],
            error_ratios: ratio_grid(0.1, 1.0, 0.1).expect("valid grid"),
            seed: 7,
        }
    }
}

/// `lo, lo+step, ..., hi` (inclusive up to rounding), each value rounded to
/// nine decimals so that `0.1 * 3` prints as `0.3`.
pub fn ratio_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(lo <= hi) {
        return Err(Error::InvalidConfig(format!("bad ratio grid {lo}:{hi}:{step}")));
    }
    let count = libm::floor((hi - lo) / step + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| libm::round((lo + i as f64 * step) * 1e9) / 1e9)
        .collect())
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_classes < 2 {
            return bad(format!("need at least 2 classes, got {}", self.num_classes));
        }
        if self.test_cases == 0 || self.docs_per_case == 0 {
            return bad("test cases and documents per case must be positive".into());
        }
        let [lo, hi] = self.sigma_range;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return bad(format!("bad sigma range {lo}:{hi}"));
        }
        if !self.gold_mean.is_finite() {
            return bad("gold mean must be finite".into());
        }
        if self.error_ratios.is_empty() {
            return bad("no error ratios".into());
        }
        if let Some(r) = self.error_ratios.iter().find(|&&r| !(r > 0.0 && r <= 1.0)) {
            return bad(format!("error ratio {r} outside (0, 1]"));
        }
        Ok(())
    }

    /// Standard deviation of case `case`, on a linear grid over the range.
    pub fn sigma(&self, case: usize) -> f64 {
        let [lo, hi] = self.sigma_range;
        if self.test_cases < 2 {
            return lo;
        }
        lo + case as f64 * (hi - lo) / (self.test_cases - 1) as f64
    }

    /// Class index the majority system predicts: the gold mean rounded and
    /// clamped to the scale.
    pub fn majority_class(&self) -> usize {
        clamp_class(libm::round(self.gold_mean), self.num_classes)
    }

    /// Every `(model, ratio)` pair, model-major.
    pub fn systems(&self) -> Vec<SystemSpec> {
        ErrorModel::ALL
            .iter()
            .flat_map(|&model| self.error_ratios.iter().map(move |&ratio| SystemSpec { model, ratio }))
            .collect()
    }
}

fn clamp_class(value: f64, num_classes: usize) -> usize {
    (value.clamp(1.0, num_classes as f64) as usize) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorModel {
    Majority,
    Random,
    TagDisplacement,
    OrdinalDisplacement,
    Proximity,
}

impl ErrorModel {
    pub const ALL: [ErrorModel; 5] = [
        ErrorModel::Majority,
        ErrorModel::Random,
        ErrorModel::TagDisplacement,
        ErrorModel::OrdinalDisplacement,
        ErrorModel::Proximity,
    ];

    /// Short tag used in file and system names.
    pub fn tag(self) -> &'static str {
        match self {
            ErrorModel::Majority => "maj",
            ErrorModel::Random => "rand",
            ErrorModel::TagDisplacement => "tdisp",
            ErrorModel::OrdinalDisplacement => "odisp",
            ErrorModel::Proximity => "prox",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == tag)
    }

    fn stream_tag(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub model: ErrorModel,
    pub ratio: f64,
}

impl SystemSpec {
    /// `"<tag>_<ratio>"`, e.g. `maj_0.1`.
    pub fn name(&self) -> String {
        format!("{}_{}", self.model.tag(), self.ratio)
    }

    /// Model family of a system name produced by [`SystemSpec::name`].
    pub fn family_of(name: &str) -> Option<ErrorModel> {
        ErrorModel::from_tag(name.split('_').next()?)
    }
}

/// Gold labels of case `case`.
pub fn generate_gold(config: &SynthConfig, case: usize) -> Result<Vec<usize>> {
    config.validate()?;
    if case >= config.test_cases {
        return Err(Error::InvalidConfig(format!(
            "case {case} out of range for {} cases",
            config.test_cases
        )));
    }
    let normal = Normal::new(config.gold_mean, config.sigma(case))
        .map_err(|_| Error::InvalidConfig("bad normal parameters".into()))?;
    let mut rng = rng::stream(config.seed, &[case as u64, 0]);
    Ok((0..config.docs_per_case)
        .map(|_| clamp_class(libm::round(normal.sample(&mut rng)), config.num_classes))
        .collect())
}

/// Item indices sorted by gold label, ties by index.
pub fn gold_order(gold: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gold.len()).collect();
    order.sort_by_key(|&d| gold[d]);
    order
}

/// Output of `spec` on `gold`, drawing from `rng`. A uniformly random subset
/// of `floor(ratio * n)` items receives the model's mistake; the rest copy
/// gold.
pub fn generate_system_with(
    gold: &[usize],
    spec: SystemSpec,
    num_classes: usize,
    majority_class: usize,
    rng: &mut rng::Rng,
) -> Result<Vec<usize>> {
    if !(spec.ratio > 0.0 && spec.ratio <= 1.0) {
        return Err(Error::InvalidConfig(format!("error ratio {} outside (0, 1]", spec.ratio)));
    }
    let n = gold.len();
    let selected = libm::floor(spec.ratio * n as f64 + 1e-9) as usize;
    let mut chosen = rand::seq::index::sample(rng, n, selected).into_vec();
    chosen.sort_unstable();

    let order = gold_order(gold);
    let mut position = vec![0usize; n];
    for (p, &d) in order.iter().enumerate() {
        position[d] = p;
    }

    let mut system = gold.to_vec();
    for d in chosen {
        system[d] = match spec.model {
            ErrorModel::Majority => majority_class,
            ErrorModel::Random => rng.random_range(0..num_classes),
            ErrorModel::TagDisplacement => (gold[d] + 1).min(num_classes - 1),
            ErrorModel::OrdinalDisplacement => gold[order[(position[d] + n / 10).min(n - 1)]],
            ErrorModel::Proximity => {
                // 1-based positions; target floor((ord + rPos) / 2)
                let r_pos = rng.random_range(1..=n);
                gold[order[(position[d] + 1 + r_pos) / 2 - 1]]
            }
        };
    }
    Ok(system)
}

/// Output of `spec` on the gold standard of case `case`.
pub fn generate_system(config: &SynthConfig, case: usize, gold: &[usize], spec: SystemSpec) -> Result<Vec<usize>> {
    let mut rng = rng::stream(
        config.seed,
        &[case as u64, spec.model.stream_tag(), spec.ratio.to_bits()],
    );
    generate_system_with(gold, spec, config.num_classes, config.majority_class(), &mut rng)
}

/// One generated test case: its gold labels and every system's output in
/// [`SynthConfig::systems`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthCase {
    pub index: usize,
    pub gold: Vec<usize>,
    pub systems: Vec<(SystemSpec, Vec<usize>)>,
}

pub fn generate_case(config: &SynthConfig, case: usize) -> Result<SynthCase> {
    let gold = generate_gold(config, case)?;
    let systems = config
        .systems()
        .into_iter()
        .map(|spec| Ok((spec, generate_system(config, case, &gold, spec)?)))
        .collect::<Result<_>>()?;
    Ok(SynthCase {
        index: case,
        gold,
        systems,
    })
}
