//! Randomised audit of metrics against three formal properties of ordinal
//! classification metrics.
//!
//! * Ordinal invariance: the score is unchanged when a strictly increasing
//!   map is applied to the class values of both gold and system output.
//! * Ordinal monotonicity: moving predictions strictly toward their gold
//!   class (never past it) strictly increases the score.
//! * Imbalance: for contiguous classes `c1, c2, c3` with `n1 > n3`, moving a
//!   `c1` item of the gold standard into `c2` scores higher than moving a
//!   `c3` item into `c2`.
//!
//! A verdict of [`Verdict::NoViolationFound`] means no counterexample turned
//! up in the reported number of trials; it is not a proof. Every audit also
//! runs a fixed probe per property, so it never misses the classic
//! counterexamples.
//!
//! Trials are independent. Trial `i` draws its data from a stream derived
//! from `(seed, property, i)`, so all metrics see the same datasets and a
//! parallel driver can reproduce the sequential result exactly.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::Gamma;
use serde::{Deserialize, Serialize};

use crate::baselines::Labels;
use crate::error::Result;
use crate::metrics::{score_labels, MetricId, MetricParams};
use crate::rng::{self, Rng};
use crate::scale::{check_values, ordinal_positions};

/// Absolute tolerance for invariance of value-based metrics.
pub const INVARIANCE_TOLERANCE: f64 = 1e-9;

/// Margin a strict increase must clear, to discount rounding noise.
pub const STRICT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyId {
    OrdinalInvariance,
    OrdinalMonotonicity,
    Imbalance,
}

impl PropertyId {
    pub const ALL: [PropertyId; 3] = [
        PropertyId::OrdinalInvariance,
        PropertyId::OrdinalMonotonicity,
        PropertyId::Imbalance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::OrdinalInvariance => "ordinal_invariance",
            PropertyId::OrdinalMonotonicity => "ordinal_monotonicity",
            PropertyId::Imbalance => "imbalance",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            PropertyId::OrdinalInvariance => 1,
            PropertyId::OrdinalMonotonicity => 2,
            PropertyId::Imbalance => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ViolationFound,
    NoViolationFound,
}

/// A strictly increasing map of the class values `1..=C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub description: String,
    pub values: Vec<f64>,
}

impl TransformSpec {
    pub fn from_fn(description: &str, num_classes: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = ordinal_positions(num_classes).into_iter().map(f).collect();
        check_values(&values)?;
        Ok(Self {
            description: description.to_string(),
            values,
        })
    }

    /// `x -> 10x + x^2`.
    pub fn quadratic(num_classes: usize) -> Self {
        Self::from_fn("10x+x^2", num_classes, |x| 10.0 * x + x * x).expect("increasing on x >= 1")
    }

    /// `x -> 10 + x^3`.
    pub fn cubic(num_classes: usize) -> Self {
        Self::from_fn("10+x^3", num_classes, |x| 10.0 + x * x * x).expect("increasing on x >= 1")
    }

    /// Cumulative random integer gaps in `1..=20`.
    pub fn random_gaps(rng: &mut Rng, num_classes: usize) -> Self {
        let mut v = 0.0;
        let values = (0..num_classes)
            .map(|_| {
                v += rng.random_range(1..=20) as f64;
                v
            })
            .collect();
        Self {
            description: "random increasing gaps".into(),
            values,
        }
    }

    /// `x -> 2^x`.
    pub fn exponential(num_classes: usize) -> Self {
        Self::from_fn("2^x", num_classes, |x| libm::exp2(x)).expect("increasing")
    }
}

/// Two evaluations the property relates.
///
/// * invariance: `score(first) == score(second)` (same labels, values
///   transformed in `second`);
/// * monotonicity: `score(second) > score(first)` (`second` moves
///   predictions toward gold);
/// * imbalance: `score(first) > score(second)` (`first` = gold with a
///   large-class item moved, `second` = gold with a small-class item moved).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCase {
    pub gold: Vec<usize>,
    pub system_first: Vec<usize>,
    pub system_second: Vec<usize>,
    pub values_first: Vec<f64>,
    pub values_second: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
}

impl PropertyCase {
    pub fn num_classes(&self) -> usize {
        self.values_first.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseSource {
    Probe,
    Trial(u64),
}

/// A replayable property violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub source: CaseSource,
    #[serde(flatten)]
    pub case: PropertyCase,
    pub score_first: f64,
    pub score_second: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Held,
    /// The metric is undefined on one of the two inputs.
    Skipped,
    Violated { first: f64, second: f64 },
}

/// Scores both sides of `case` and checks the property relation.
pub fn evaluate_case(metric: MetricId, property: PropertyId, case: &PropertyCase, params: &MetricParams) -> Evaluation {
    let side = |system: &[usize], values: &[f64]| -> Result<f64> {
        let labels = Labels::new(&case.gold, system, values)?;
        score_labels(metric, &labels, params)
    };
    let (first, second) = match (
        side(&case.system_first, &case.values_first),
        side(&case.system_second, &case.values_second),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Evaluation::Skipped,
    };
    let holds = match property {
        PropertyId::OrdinalInvariance => {
            if metric.uses_class_values() {
                libm::fabs(first - second) <= INVARIANCE_TOLERANCE
            } else {
                first == second
            }
        }
        PropertyId::OrdinalMonotonicity => second > first + STRICT_MARGIN,
        PropertyId::Imbalance => first > second + STRICT_MARGIN,
    };
    if holds {
        Evaluation::Held
    } else {
        Evaluation::Violated { first, second }
    }
}

/// Fixed probes: the classic counterexamples for each property.
pub fn probe_case(property: PropertyId) -> PropertyCase {
    // classes 1..=5 as indices 0..=4
    match property {
        PropertyId::OrdinalInvariance => PropertyCase {
            gold: vec![2, 3, 4],
            system_first: vec![0, 1, 2],
            system_second: vec![0, 1, 2],
            values_first: ordinal_positions(5),
            values_second: TransformSpec::cubic(5).values,
            transform: Some("10+x^3".into()),
        },
        PropertyId::OrdinalMonotonicity => PropertyCase {
            gold: vec![2, 3, 4],
            system_first: vec![0, 1, 2],
            system_second: vec![1, 2, 3],
            values_first: ordinal_positions(5),
            values_second: ordinal_positions(5),
            transform: None,
        },
        // gold (1,1,2,3), outputs (1,2,2,3) and (1,1,2,2)
        PropertyId::Imbalance => PropertyCase {
            gold: vec![0, 0, 1, 2],
            system_first: vec![0, 1, 1, 2],
            system_second: vec![0, 0, 1, 1],
            values_first: ordinal_positions(3),
            values_second: ordinal_positions(3),
            transform: None,
        },
    }
}

/// Options shared by all trials of one audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub params: MetricParams,
    /// Diagnostic mode: let generated gold standards leave classes empty.
    pub allow_empty_gold_classes: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            params: MetricParams::default(),
            allow_empty_gold_classes: false,
        }
    }
}

/// Random case for trial `trial`; `None` when the drawn data admits no case
/// (e.g. no contiguous triple with unequal ends).
pub fn generate_case(property: PropertyId, seed: u64, trial: u64, options: &AuditOptions) -> Option<PropertyCase> {
    let mut rng = rng::stream(seed, &[property.stream_tag(), trial]);
    let rng = &mut rng;
    let (k, gold) = gen::random_gold(rng, !options.allow_empty_gold_classes);
    let identity = ordinal_positions(k);
    match property {
        PropertyId::OrdinalInvariance => {
            let system = gen::noisy_system(rng, &gold, k);
            let transform = match rng.random_range(0..4) {
                0 => TransformSpec::quadratic(k),
                1 => TransformSpec::cubic(k),
                2 => TransformSpec::exponential(k),
                _ => TransformSpec::random_gaps(rng, k),
            };
            Some(PropertyCase {
                gold,
                system_first: system.clone(),
                system_second: system,
                values_first: identity,
                values_second: transform.values,
                transform: Some(transform.description),
            })
        }
        PropertyId::OrdinalMonotonicity => {
            let mut system = gen::noisy_system(rng, &gold, k);
            gen::ensure_mistake(rng, &gold, &mut system, k);
            let improved = gen::improve(rng, &gold, &system, 3, false)?;
            Some(PropertyCase {
                gold,
                system_first: system,
                system_second: improved,
                values_first: identity.clone(),
                values_second: identity,
                transform: None,
            })
        }
        PropertyId::Imbalance => {
            let (large, small) = gen::imbalance_pair(rng, &gold, k)?;
            Some(PropertyCase {
                gold,
                system_first: large,
                system_second: small,
                values_first: identity.clone(),
                values_second: identity,
                transform: None,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Held,
    Skipped,
    Violated(Counterexample),
}

fn outcome(
    metric: MetricId,
    property: PropertyId,
    case: PropertyCase,
    source: CaseSource,
    params: &MetricParams,
) -> TrialOutcome {
    match evaluate_case(metric, property, &case, params) {
        Evaluation::Held => TrialOutcome::Held,
        Evaluation::Skipped => TrialOutcome::Skipped,
        Evaluation::Violated { first, second } => TrialOutcome::Violated(Counterexample {
            source,
            case,
            score_first: first,
            score_second: second,
        }),
    }
}

pub fn run_probe(metric: MetricId, property: PropertyId, options: &AuditOptions) -> TrialOutcome {
    outcome(metric, property, probe_case(property), CaseSource::Probe, &options.params)
}

pub fn run_trial(metric: MetricId, property: PropertyId, seed: u64, trial: u64, options: &AuditOptions) -> TrialOutcome {
    match generate_case(property, seed, trial, options) {
        Some(case) => outcome(metric, property, case, CaseSource::Trial(trial), &options.params),
        None => TrialOutcome::Skipped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Held,
    Skipped,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditVerdict {
    pub metric: MetricId,
    pub property: PropertyId,
    /// Random trials requested.
    pub trials: u64,
    /// Random trials executed; the audit stops at the first violation.
    pub trials_run: u64,
    /// Executed trials on which the metric was defined.
    pub evaluated: u64,
    /// Executed trials skipped because the metric was undefined or no case
    /// could be drawn.
    pub skipped: u64,
    pub probe: ProbeStatus,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Counterexample>,
}

/// Folds a probe outcome and random-trial outcomes (in trial order) into a
/// verdict. Outcomes after the first violation are ignored.
pub fn fold_outcomes(
    metric: MetricId,
    property: PropertyId,
    trials: u64,
    probe: TrialOutcome,
    outcomes: impl IntoIterator<Item = TrialOutcome>,
) -> AuditVerdict {
    let mut verdict = AuditVerdict {
        metric,
        property,
        trials,
        trials_run: 0,
        evaluated: 0,
        skipped: 0,
        probe: ProbeStatus::Held,
        verdict: Verdict::NoViolationFound,
        violation: None,
    };
    match probe {
        TrialOutcome::Held => {}
        TrialOutcome::Skipped => verdict.probe = ProbeStatus::Skipped,
        TrialOutcome::Violated(c) => {
            verdict.probe = ProbeStatus::Violated;
            verdict.verdict = Verdict::ViolationFound;
            verdict.violation = Some(c);
            return verdict;
        }
    }
    for o in outcomes.into_iter().take(trials as usize) {
        verdict.trials_run += 1;
        match o {
            TrialOutcome::Held => verdict.evaluated += 1,
            TrialOutcome::Skipped => verdict.skipped += 1,
            TrialOutcome::Violated(c) => {
                verdict.evaluated += 1;
                verdict.verdict = Verdict::ViolationFound;
                verdict.violation = Some(c);
                break;
            }
        }
    }
    verdict
}

pub fn audit_property_with(
    metric: MetricId,
    property: PropertyId,
    trials: u64,
    seed: u64,
    options: &AuditOptions,
) -> AuditVerdict {
    let probe = run_probe(metric, property, options);
    let outcomes = (0..trials).map(|t| run_trial(metric, property, seed, t, options));
    fold_outcomes(metric, property, trials, probe, outcomes)
}

pub fn check_invariance(metric: MetricId, trials: u64, seed: u64) -> AuditVerdict {
    audit_property_with(metric, PropertyId::OrdinalInvariance, trials, seed, &AuditOptions::default())
}

pub fn check_monotonicity(metric: MetricId, trials: u64, seed: u64) -> AuditVerdict {
    audit_property_with(metric, PropertyId::OrdinalMonotonicity, trials, seed, &AuditOptions::default())
}

pub fn check_imbalance(metric: MetricId, trials: u64, seed: u64) -> AuditVerdict {
    audit_property_with(metric, PropertyId::Imbalance, trials, seed, &AuditOptions::default())
}

/// Metric-major table of verdicts, properties in [`PropertyId::ALL`] order.
pub fn audit_all(metrics: &[MetricId], trials: u64, seed: u64) -> Vec<AuditVerdict> {
    let options = AuditOptions::default();
    metrics
        .iter()
        .flat_map(|&m| {
            PropertyId::ALL
                .iter()
                .map(move |&p| audit_property_with(m, p, trials, seed, &options))
        })
        .collect()
}

/// Re-evaluates a recorded counterexample; `true` if it still violates the
/// property.
pub fn replay(metric: MetricId, property: PropertyId, counterexample: &Counterexample, params: &MetricParams) -> bool {
    matches!(
        evaluate_case(metric, property, &counterexample.case, params),
        Evaluation::Violated { .. }
    )
}

/// Reference verdict pattern `[invariance, monotonicity, imbalance]`
/// (`true` = satisfied) for metrics that appear in the constraint table;
/// `None` for metrics the table does not list.
pub fn table1_expectation(metric: MetricId) -> Option<[bool; 3]> {
    use MetricId::*;
    Some(match metric {
        Accuracy | AccWithinN => [true, false, false],
        Maac | CohenKappa | MacroF1 => [true, false, true],
        Mae | Mse => [false, true, false],
        MacroMae | MacroMse => [false, true, true],
        WeightedKappaLinear | WeightedKappaQuadratic => [false, true, true],
        Cosine => [false, true, false],
        Pearson => [false, false, false],
        Spearman | KendallTauB => [true, false, true],
        KendallTauA => [true, false, false],
        MutualInformation | Purity | InversePurity => [true, false, true],
        CemNom => [true, false, true],
        CemInt => [false, true, true],
        CemOrd => [true, true, true],
        CemFlat => return None,
    })
}

/// A verdict that disagrees with the reference table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Mismatch {
    pub metric: MetricId,
    pub property: PropertyId,
    pub expected_satisfied: bool,
    pub verdict: Verdict,
}

pub fn table1_mismatches(verdicts: &[AuditVerdict]) -> Vec<Table1Mismatch> {
    verdicts
        .iter()
        .filter_map(|v| {
            let expected = table1_expectation(v.metric)?;
            let idx = PropertyId::ALL.iter().position(|&p| p == v.property)?;
            let satisfied = v.verdict == Verdict::NoViolationFound;
            (satisfied != expected[idx]).then(|| Table1Mismatch {
                metric: v.metric,
                property: v.property,
                expected_satisfied: expected[idx],
                verdict: v.verdict,
            })
        })
        .collect()
}

/// Random dataset generators used by the audit.
pub mod gen {
    use super::*;

    pub const MIN_CLASSES: usize = 3;
    pub const MAX_CLASSES: usize = 11;
    pub const MIN_ITEMS: usize = 10;
    pub const MAX_ITEMS: usize = 200;

    /// Class weights: a skewed random profile, a single peak, or two peaks
    /// at the ends of the scale.
    pub fn class_weights(rng: &mut Rng, k: usize) -> Vec<f64> {
        match rng.random_range(0..3) {
            0 => {
                let shape = [0.3, 1.0, 3.0][rng.random_range(0..3)];
                let gamma = Gamma::new(shape, 1.0).expect("positive shape");
                (0..k).map(|_| gamma.sample(rng) + 1e-6).collect()
            }
            1 => {
                let center = rng.random_range(0.0..(k - 1) as f64);
                let width = rng.random_range(0.5..(k as f64 / 2.0));
                (0..k)
                    .map(|i| {
                        let x = i as f64 - center;
                        libm::exp(-x * x / (2.0 * width * width)) + 1e-6
                    })
                    .collect()
            }
            _ => {
                let width = rng.random_range(0.5..(k as f64 / 2.0));
                (0..k)
                    .map(|i| {
                        let lo = i as f64;
                        let hi = (k - 1 - i) as f64;
                        libm::exp(-lo * lo / (2.0 * width * width)) + libm::exp(-hi * hi / (2.0 * width * width)) + 1e-6
                    })
                    .collect()
            }
        }
    }

    /// Random gold standard with 3–11 classes and 10–200 items. With
    /// `populated`, every class receives at least one item.
    pub fn random_gold(rng: &mut Rng, populated: bool) -> (usize, Vec<usize>) {
        let k = rng.random_range(MIN_CLASSES..=MAX_CLASSES);
        let n = rng.random_range(MIN_ITEMS.max(k)..=MAX_ITEMS);
        let weights = class_weights(rng, k);
        let dist = WeightedIndex::new(&weights).expect("positive weights");
        let mut gold: Vec<usize> = if populated { (0..k).collect() } else { Vec::new() };
        while gold.len() < n {
            gold.push(dist.sample(rng));
        }
        gold.shuffle(rng);
        (k, gold)
    }

    /// System output that keeps, nudges or randomises each gold label.
    pub fn noisy_system(rng: &mut Rng, gold: &[usize], k: usize) -> Vec<usize> {
        let keep = rng.random_range(0.0..1.0);
        gold.iter()
            .map(|&g| {
                let u: f64 = rng.random();
                if u < keep {
                    g
                } else if rng.random_bool(0.5) {
                    let step = rng.random_range(1..=2);
                    if rng.random_bool(0.5) {
                        (g + step).min(k - 1)
                    } else {
                        g.saturating_sub(step)
                    }
                } else {
                    rng.random_range(0..k)
                }
            })
            .collect()
    }

    /// Makes sure at least one prediction is wrong.
    pub fn ensure_mistake(rng: &mut Rng, gold: &[usize], system: &mut [usize], k: usize) {
        if gold.iter().zip(system.iter()).all(|(g, s)| g == s) {
            let d = rng.random_range(0..gold.len());
            system[d] = (gold[d] + rng.random_range(1..k)) % k;
        }
    }

    /// Moves between one and `max_moved` wrong predictions toward their gold
    /// class without passing it; with `single_step` each moves exactly one
    /// class. `None` if every prediction is already correct.
    pub fn improve(rng: &mut Rng, gold: &[usize], system: &[usize], max_moved: usize, single_step: bool) -> Option<Vec<usize>> {
        let mut wrong: Vec<usize> = (0..gold.len()).filter(|&d| gold[d] != system[d]).collect();
        if wrong.is_empty() {
            return None;
        }
        wrong.shuffle(rng);
        let moved = rng.random_range(1..=max_moved.min(wrong.len()));
        let mut improved = system.to_vec();
        for &d in &wrong[..moved] {
            let distance = gold[d].abs_diff(system[d]);
            let step = if single_step { 1 } else { rng.random_range(1..=distance) };
            improved[d] = if system[d] > gold[d] {
                system[d] - step
            } else {
                system[d] + step
            };
        }
        Some(improved)
    }

    /// `(g with a c1 item moved to c2, g with a c3 item moved to c2)` for a
    /// random contiguous triple whose end classes differ in size, oriented
    /// so that `n1 > n3 >= 1`.
    pub fn imbalance_pair(rng: &mut Rng, gold: &[usize], k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut counts = vec![0usize; k];
        for &g in gold {
            counts[g] += 1;
        }
        let mut windows: Vec<usize> = (0..k.saturating_sub(2))
            .filter(|&c| counts[c] != counts[c + 2] && counts[c].min(counts[c + 2]) >= 1)
            .collect();
        if windows.is_empty() {
            return None;
        }
        windows.shuffle(rng);
        let c = windows[0];
        let (c1, c3) = if counts[c] > counts[c + 2] { (c, c + 2) } else { (c + 2, c) };
        let c2 = c + 1;
        let pick = |rng: &mut Rng, class: usize| {
            let members: Vec<usize> = (0..gold.len()).filter(|&d| gold[d] == class).collect();
            members[rng.random_range(0..members.len())]
        };
        let d1 = pick(rng, c1);
        let d3 = pick(rng, c3);
        let mut from_large = gold.to_vec();
        from_large[d1] = c2;
        let mut from_small = gold.to_vec();
        from_small[d3] = c2;
        Some((from_large, from_small))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes_reproduce_the_classic_counterexamples() {
        let opts = AuditOptions::default();
        // equal accuracy before and after moving toward gold
        assert!(matches!(
            run_probe(MetricId::Accuracy, PropertyId::OrdinalMonotonicity, &opts),
            TrialOutcome::Violated(_)
        ));
        // accuracy 3/4 on both imbalance outputs
        match run_probe(MetricId::Accuracy, PropertyId::Imbalance, &opts) {
            TrialOutcome::Violated(c) => {
                assert_eq!(c.score_first, 0.75);
                assert_eq!(c.score_second, 0.75);
            }
            other => panic!("{other:?}"),
        }
        // MAE changes under 10 + x^3
        assert!(matches!(
            run_probe(MetricId::Mae, PropertyId::OrdinalInvariance, &opts),
            TrialOutcome::Violated(_)
        ));
        // ordinal CEM is undefined on the probe's empty gold classes
        assert_eq!(
            run_probe(MetricId::CemOrd, PropertyId::OrdinalMonotonicity, &opts),
            TrialOutcome::Skipped
        );
    }

    #[test]
    fn generated_cases_respect_their_contracts() {
        let opts = AuditOptions::default();
        for t in 0..200 {
            let case = generate_case(PropertyId::OrdinalMonotonicity, 3, t, &opts).unwrap();
            let k = case.num_classes();
            let mut counts = vec![0; k];
            case.gold.iter().for_each(|&g| counts[g] += 1);
            assert!(counts.iter().all(|&c| c > 0));
            let mut changed = false;
            for d in 0..case.gold.len() {
                let (g, s, s2) = (case.gold[d], case.system_first[d], case.system_second[d]);
                if s != s2 {
                    changed = true;
                    assert!((s > s2 && s2 >= g) || (s < s2 && s2 <= g));
                }
            }
            assert!(changed);

            if let Some(case) = generate_case(PropertyId::Imbalance, 3, t, &opts) {
                let diff_first: Vec<usize> = (0..case.gold.len()).filter(|&d| case.gold[d] != case.system_first[d]).collect();
                let diff_second: Vec<usize> = (0..case.gold.len()).filter(|&d| case.gold[d] != case.system_second[d]).collect();
                assert_eq!(diff_first.len(), 1);
                assert_eq!(diff_second.len(), 1);
                let (d1, d3) = (diff_first[0], diff_second[0]);
                let (c1, c3) = (case.gold[d1], case.gold[d3]);
                assert_eq!(c1.abs_diff(c3), 2);
                assert_eq!(case.system_first[d1], case.system_second[d3]);
                let n = |c: usize| case.gold.iter().filter(|&&g| g == c).count();
                assert!(n(c1) > n(c3));
            }
        }
    }

    #[test]
    fn verdicts_are_deterministic_and_replayable() {
        let a = check_monotonicity(MetricId::Accuracy, 50, 11);
        let b = check_monotonicity(MetricId::Accuracy, 50, 11);
        assert_eq!(a, b);
        assert_eq!(a.verdict, Verdict::ViolationFound);
        let cex = a.violation.as_ref().unwrap();
        assert!(replay(MetricId::Accuracy, PropertyId::OrdinalMonotonicity, cex, &MetricParams::default()));
    }

    #[test]
    fn empty_metric_set_gives_empty_table() {
        assert!(audit_all(&[], 10, 1).is_empty());
    }

    #[test]
    fn table_covers_every_metric_but_the_flat_ablation() {
        for &m in MetricId::ALL {
            assert_eq!(table1_expectation(m).is_none(), m == MetricId::CemFlat);
        }
    }
}
