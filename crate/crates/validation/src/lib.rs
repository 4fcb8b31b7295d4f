//! Acceptance checks. Each check returns a [`Check`] instead of panicking so
//! the runner can report every criterion, passing or not.

use std::fmt;
use std::path::Path;

use ordeval::{audit, metaeval, suite};
use ordeval_core::baselines::{self, Labels};
use ordeval_core::cem::{self, ciq, EmptyClassPolicy, ProximityTable, ScaleType};
use ordeval_core::meta::{MetaConfig, MetaReport, ALL_SYSTEMS_COLUMN, DEFAULT_REFERENCE};
use ordeval_core::metrics::{score, score_labels, MetricId, MetricParams};
use ordeval_core::properties::{self, gen, AuditOptions, Verdict};
use ordeval_core::scale::ordinal_positions;
use ordeval_core::synth::SynthConfig;
use ordeval_core::{rng, GoldDistribution, LabeledDataset, OrdinalScale};
use rand::seq::SliceRandom;
use rand::Rng;

/// Absolute tolerance for values quoted to two decimals.
pub const TWO_DECIMALS: f64 = 0.005;
/// Tolerance for the worked proximities of the review-score distributions.
pub const REVIEW_TOLERANCE: f64 = 0.01;
/// Tolerance for cosine values quoted to three decimals.
pub const THREE_DECIMALS: f64 = 0.001;
/// Nominal CEM against accuracy under uniform gold.
pub const NOMINAL_TOLERANCE: f64 = 1e-9;
/// Table path against per-item enumeration.
pub const ORACLE_TOLERANCE: f64 = 1e-12;
/// Bracket for ordinal CEM coverage over all synthetic systems.
pub const COVERAGE_BRACKET: (f64, f64) = (0.85, 0.95);

pub const AUDIT_TRIALS: u64 = 10_000;
pub const AUDIT_SEED: u64 = 7;
pub const PROPERTY_TRIALS: u64 = 10_000;
pub const PROPERTY_SEED: u64 = 5;
pub const NOMINAL_DATASETS: u64 = 1_000;

#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {}",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Collects failed sub-checks of one criterion.
struct Findings(Vec<String>);

impl Findings {
    fn new() -> Self {
        Findings(Vec::new())
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn into_check(self, criterion: u8, name: &'static str, ok_detail: String) -> Check {
        let pass = self.0.is_empty();
        Check {
            criterion,
            name,
            pass,
            detail: if pass { ok_detail } else { self.0.join("; ") },
        }
    }
}

fn close(got: f64, expected: f64, tol: f64) -> bool {
    (got - expected).abs() <= tol
}

/// The two sentiment systems with confusion matrices A and B over a
/// 10/60/30 gold standard.
pub fn sentiment_dataset() -> LabeledDataset {
    let a = [[5, 5, 7], [1, 50, 8], [4, 5, 15]];
    let b = [[7, 12, 4], [1, 45, 8], [2, 3, 18]];
    let mut gold = Vec::new();
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    for g in 0..3 {
        let n: usize = (0..3).map(|s| a[s][g]).sum();
        gold.extend(std::iter::repeat_n(g, n));
        for s in 0..3 {
            sa.extend(std::iter::repeat_n(s, a[s][g]));
            sb.extend(std::iter::repeat_n(s, b[s][g]));
        }
    }
    let scale = OrdinalScale::new(["neg", "neu", "pos"]).unwrap();
    LabeledDataset::from_gold_indices(scale, gold)
        .and_then(|d| d.with_system_indices("A", sa))
        .and_then(|d| d.with_system_indices("B", sb))
        .expect("consistent fixture")
}

pub fn criterion_1() -> Check {
    let mut f = Findings::new();
    let table = ProximityTable::build(&GoldDistribution::from_counts(vec![10, 60, 30]).unwrap()).unwrap();
    let expected = [[4.32, 0.62, 0.07], [1.32, 1.74, 0.74], [0.23, 0.42, 2.74]];
    for s in 0..3 {
        for g in 0..3 {
            let p = table.prox(s, g);
            f.expect(close(p, expected[s][g], TWO_DECIMALS), || {
                format!("prox({s},{g}) = {p:.4}, expected {}", expected[s][g])
            });
        }
    }
    let ds = sentiment_dataset();
    let p = MetricParams::default();
    let cem_a = score(MetricId::CemOrd, &ds, "A", &p).unwrap();
    let cem_b = score(MetricId::CemOrd, &ds, "B", &p).unwrap();
    let acc_a = score(MetricId::Accuracy, &ds, "A", &p).unwrap();
    let acc_b = score(MetricId::Accuracy, &ds, "B", &p).unwrap();
    f.expect(close(cem_a, 0.71, TWO_DECIMALS), || format!("CEM(A) = {cem_a:.4}"));
    f.expect(close(cem_b, 0.76, TWO_DECIMALS), || format!("CEM(B) = {cem_b:.4}"));
    f.expect(acc_a == 0.70 && acc_b == 0.70, || format!("accuracy {acc_a} / {acc_b}"));
    f.into_check(
        1,
        "sentiment example",
        format!("9 proximities ok, CEM A={cem_a:.4} B={cem_b:.4}, accuracy {acc_a}/{acc_b}"),
    )
}

pub fn criterion_2() -> Check {
    let mut f = Findings::new();
    let left = ProximityTable::build(&GoldDistribution::from_counts(vec![7, 105, 193, 90, 7]).unwrap()).unwrap();
    let right = ProximityTable::build(&GoldDistribution::from_counts(vec![176, 10, 3, 10, 177]).unwrap()).unwrap();
    let cases = [
        ("left prox(weak_accept, weak_reject)", left.prox(3, 1), 0.23),
        ("right prox(weak_accept, weak_reject)", right.prox(3, 1), 4.38),
        ("left prox(reject, reject)", left.prox(0, 0), 6.84),
        ("left prox(undecided, undecided)", left.prox(2, 2), 2.06),
    ];
    let mut values = Vec::new();
    for (what, got, expected) in cases {
        f.expect(close(got, expected, REVIEW_TOLERANCE), || format!("{what} = {got:.4}, expected {expected}"));
        values.push(format!("{got:.3}"));
    }
    f.into_check(2, "review-score proximities", values.join(", "))
}

pub fn criterion_3() -> Check {
    let mut f = Findings::new();
    let gold = [0, 0, 1, 2];
    let values = ordinal_positions(3);
    let params = MetricParams::default();
    let pair = |m: MetricId| {
        let s = |sys: &[usize]| score_labels(m, &Labels::new(&gold, sys, &values).unwrap(), &params).unwrap();
        (s(&[0, 1, 1, 2]), s(&[0, 0, 1, 1]))
    };
    let exact = [
        (MetricId::Accuracy, (0.75, 0.75)),
        (MetricId::AccWithinN, (1.0, 1.0)),
        (MetricId::Mae, (-0.25, -0.25)),
        (MetricId::Mse, (-0.25, -0.25)),
    ];
    for (m, expected) in exact {
        let got = pair(m);
        f.expect(got == expected, || format!("{m} = {got:?}, expected {expected:?}"));
    }
    let cos = pair(MetricId::Cosine);
    f.expect(
        close(cos.0, 0.973, THREE_DECIMALS) && close(cos.1, 0.979, THREE_DECIMALS),
        || format!("cosine = {cos:?}"),
    );
    let pearson = pair(MetricId::Pearson);
    f.expect(
        close(pearson.0, 0.85, TWO_DECIMALS) && close(pearson.1, 0.90, TWO_DECIMALS),
        || format!("pearson = {pearson:?}"),
    );
    f.into_check(
        3,
        "imbalance counterexamples",
        format!("cosine ({:.4}, {:.4}), pearson ({:.4}, {:.4})", cos.0, cos.1, pearson.0, pearson.1),
    )
}

/// Full audit, as `ordeval audit --trials 10000 --expect-table1` runs it.
pub fn run_audit() -> audit::AuditReport {
    audit::audit(MetricId::ALL, AUDIT_TRIALS, AUDIT_SEED, &AuditOptions::default())
}

pub fn criterion_4(report: &audit::AuditReport) -> Check {
    let mut f = Findings::new();
    for v in &report.verdicts {
        if let Some(c) = &v.violation {
            f.expect(properties::replay(v.metric, v.property, c, &MetricParams::default()), || {
                format!("{} {} counterexample does not replay", v.metric, v.property.as_str())
            });
        }
        f.expect(
            (v.verdict == Verdict::ViolationFound) == v.violation.is_some(),
            || format!("{} {}: verdict without counterexample", v.metric, v.property.as_str()),
        );
    }
    for m in &report.table1_mismatches {
        f.0.push(format!(
            "{} {} expected {}",
            m.metric,
            m.property.as_str(),
            if m.expected_satisfied { "no violation" } else { "a violation" }
        ));
    }
    let compared = report
        .verdicts
        .iter()
        .filter(|v| properties::table1_expectation(v.metric).is_some())
        .count();
    let check = f.into_check(4, "constraint table", format!("{compared} verdicts match"));
    if check.pass {
        check
    } else {
        Check {
            detail: format!("{} of {compared} verdicts differ: {}", report.table1_mismatches.len(), check.detail),
            ..check
        }
    }
}

fn counts(gold: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    gold.iter().for_each(|&g| c[g] += 1);
    c
}

fn ord_cem(gold: &[usize], system: &[usize], k: usize, policy: EmptyClassPolicy) -> f64 {
    cem::cem_labels(ScaleType::Ord, gold, system, &ordinal_positions(k), policy).expect("defined on populated gold")
}

pub fn criterion_5() -> Check {
    let mut f = Findings::new();
    let strict = EmptyClassPolicy::Reject;
    let params = MetricParams::default();
    let (mut invariance, mut monotonicity, mut imbalance) = (0u64, 0u64, 0u64);
    for t in 0..PROPERTY_TRIALS {
        // invariance: rename classes, and embed them into a wider scale by a
        // strictly increasing injection (the new classes stay empty)
        let mut r = rng::stream(PROPERTY_SEED, &[1, t]);
        let (k, gold) = gen::random_gold(&mut r, true);
        let system = gen::noisy_system(&mut r, &gold, k);
        let base = ord_cem(&gold, &system, k, strict);

        let scale = OrdinalScale::numbered(k).unwrap();
        let renamed = scale.relabel(|i, _| format!("grade {}", (b'a' + i as u8) as char)).unwrap();
        let ds = LabeledDataset::from_gold_indices(renamed, gold.clone())
            .and_then(|d| d.with_system_indices("s", system.clone()))
            .unwrap();
        let via_labels = score(MetricId::CemOrd, &ds, "s", &params).unwrap();

        let mut positions: Vec<usize> = Vec::with_capacity(k);
        let mut next = 0;
        for _ in 0..k {
            next += r.random_range(1..=3);
            positions.push(next);
        }
        let wide = next + 1;
        let lift = |xs: &[usize]| xs.iter().map(|&x| positions[x]).collect::<Vec<_>>();
        let embedded = ord_cem(&lift(&gold), &lift(&system), wide, EmptyClassPolicy::Allow);
        if base.to_bits() != via_labels.to_bits() || base.to_bits() != embedded.to_bits() {
            invariance += 1;
        }

        // monotonicity: one wrong prediction moves one class toward gold
        let mut r = rng::stream(PROPERTY_SEED, &[2, t]);
        let (k, gold) = gen::random_gold(&mut r, true);
        let mut system = gen::noisy_system(&mut r, &gold, k);
        gen::ensure_mistake(&mut r, &gold, &mut system, k);
        let improved = gen::improve(&mut r, &gold, &system, 1, true).expect("a wrong prediction exists");
        if ord_cem(&gold, &improved, k, strict) <= ord_cem(&gold, &system, k, strict) {
            monotonicity += 1;
        }

        // imbalance, through the metric and through the closed form
        let mut r = rng::stream(PROPERTY_SEED, &[3, t]);
        let (k, gold) = gen::random_gold(&mut r, true);
        if let Some((from_large, from_small)) = gen::imbalance_pair(&mut r, &gold, k) {
            let c = counts(&gold, k);
            let d1 = (0..gold.len()).find(|&d| gold[d] != from_large[d]).unwrap();
            let d3 = (0..gold.len()).find(|&d| gold[d] != from_small[d]).unwrap();
            let (n1, n2, n3) = (c[gold[d1]] as f64, c[from_large[d1]] as f64, c[gold[d3]] as f64);
            let closed = ((n1 / 2.0) * (n3 + n2 / 2.0) / ((n1 + n2 / 2.0) * (n3 / 2.0))).log2();
            let by_metric = ord_cem(&gold, &from_large, k, strict) > ord_cem(&gold, &from_small, k, strict);
            if !(by_metric && closed > 0.0 && n1 > n3) {
                imbalance += 1;
            }
        }
    }
    f.expect(invariance == 0, || format!("{invariance} invariance violations"));
    f.expect(monotonicity == 0, || format!("{monotonicity} monotonicity violations"));
    f.expect(imbalance == 0, || format!("{imbalance} imbalance violations"));
    f.into_check(
        5,
        "ordinal CEM properties",
        format!("{PROPERTY_TRIALS} trials per property, no violations"),
    )
}

fn sequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                (0..k).map(move |c| {
                    let mut v = p.clone();
                    v.push(c);
                    v
                })
            })
            .collect()
    })
}

pub fn criterion_6() -> Check {
    let mut f = Findings::new();
    let mut r = rng::stream(PROPERTY_SEED, &[6]);
    let mut worst: f64 = 0.0;
    for _ in 0..NOMINAL_DATASETS {
        let k = r.random_range(2..=11);
        let per_class = r.random_range(1..=20);
        let mut gold: Vec<usize> = (0..k).flat_map(|c| std::iter::repeat_n(c, per_class)).collect();
        gold.shuffle(&mut r);
        let keep: f64 = r.random();
        let system: Vec<usize> = gold
            .iter()
            .map(|&g| if r.random_bool(keep) { g } else { r.random_range(0..k) })
            .collect();
        let values = ordinal_positions(k);
        let nom = cem::cem_labels(ScaleType::Nom, &gold, &system, &values, EmptyClassPolicy::Reject).unwrap();
        let acc = baselines::accuracy(&Labels::new(&gold, &system, &values).unwrap());
        worst = worst.max((nom - acc).abs());
    }
    f.expect(worst <= NOMINAL_TOLERANCE, || format!("max |CEM_NOM - accuracy| = {worst:e}"));

    let mut checked = 0;
    for n in 1..=4 {
        for gold in sequences(n, 2) {
            let c = counts(&gold, 2);
            if c[0] != c[1] {
                continue;
            }
            let dist = GoldDistribution::from_labels(&gold, 2).unwrap();
            let w = |a: usize, b: usize| ciq(ScaleType::Nom, &dist, a, b).unwrap();
            for system in sequences(n, 2) {
                for class in 0..2 {
                    let pairs: Vec<(usize, usize)> = gold.iter().copied().zip(system.iter().copied()).collect();
                    let hits = pairs.iter().filter(|&&(g, s)| g == class && s == class).count() as f64;
                    let predicted: Vec<&(usize, usize)> = pairs.iter().filter(|p| p.1 == class).collect();
                    if !predicted.is_empty() {
                        let sum: f64 = predicted.iter().map(|&&(g, s)| w(s, g)).sum();
                        let max = predicted.len() as f64 * w(class, class);
                        let precision = hits / predicted.len() as f64;
                        f.expect(close(sum / max, precision, ORACLE_TOLERANCE), || {
                            format!("precision mismatch on {gold:?} / {system:?}")
                        });
                    }
                    let relevant: Vec<&(usize, usize)> = pairs.iter().filter(|p| p.0 == class).collect();
                    let sum: f64 = relevant.iter().map(|&&(g, s)| w(s, g)).sum();
                    let max = relevant.len() as f64 * w(class, class);
                    let recall = hits / relevant.len() as f64;
                    f.expect(close(sum / max, recall, ORACLE_TOLERANCE), || {
                        format!("recall mismatch on {gold:?} / {system:?}")
                    });
                    checked += 1;
                }
            }
        }
    }
    f.into_check(
        6,
        "nominal CEM, accuracy, precision and recall",
        format!("{NOMINAL_DATASETS} uniform datasets (max gap {worst:e}); {checked} class-level precision/recall checks"),
    )
}

pub fn criterion_10() -> Check {
    let mut f = Findings::new();
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        for n in 1..=5 {
            let all = sequences(n, k);
            for gold in &all {
                let populated = counts(gold, k).iter().all(|&c| c > 0);
                for system in all.iter() {
                    let got = cem::cem_labels(ScaleType::Ord, gold, system, &ordinal_positions(k), EmptyClassPolicy::Reject);
                    if !populated {
                        f.expect(got.is_err(), || format!("{gold:?} {system:?} should be rejected"));
                        continue;
                    }
                    // per item: -log2 P(gold item at least as close to g(d) as s(d)),
                    // items in class s(d) counted half
                    let item_ciq = |s: usize, g: usize| {
                        let (lo, hi) = (s.min(g), s.max(g));
                        let mass: f64 = gold
                            .iter()
                            .map(|&x| if x == s { 0.5 } else if lo <= x && x <= hi { 1.0 } else { 0.0 })
                            .sum();
                        -(mass / n as f64).log2()
                    };
                    let num: f64 = gold.iter().zip(system).map(|(&g, &s)| item_ciq(s, g)).sum();
                    let den: f64 = gold.iter().map(|&g| item_ciq(g, g)).sum();
                    let expected = num / den;
                    match got {
                        Ok(v) => {
                            worst = worst.max((v - expected).abs());
                            compared += 1;
                        }
                        Err(e) => f.0.push(format!("{gold:?} {system:?}: {e}")),
                    }
                }
            }
        }
    }
    f.expect(worst <= ORACLE_TOLERANCE, || format!("max deviation {worst:e}"));
    f.into_check(
        10,
        "exhaustive oracle",
        format!("{compared} populated datasets, max deviation {worst:e}"),
    )
}

/// Default-scale synthetic meta-evaluation over `suite_dir` (generated if
/// missing a manifest).
pub fn run_metaeval(suite_dir: &Path) -> ordeval::Result<metaeval::MetaOutput> {
    if !suite_dir.join(suite::MANIFEST).exists() {
        suite::write_suite(&SynthConfig::default(), suite_dir)?;
    }
    let loaded = suite::load_suite(suite_dir, None)?;
    let config = MetaConfig {
        reference: DEFAULT_REFERENCE.to_vec(),
        metrics: MetricId::ALL.to_vec(),
    };
    let mut params = MetricParams::default();
    params.empty_classes = EmptyClassPolicy::Allow;
    metaeval::metaeval(&loaded, &config, &params)
}

fn coverage(report: &MetaReport, metric: MetricId, column: usize) -> Option<f64> {
    report.row(metric)?.coverage.get(column)?.value()
}

pub fn criterion_7(report: &MetaReport) -> Check {
    let mut f = Findings::new();
    let all = report.column_index(ALL_SYSTEMS_COLUMN).expect("all-systems column");
    let cem = coverage(report, MetricId::CemOrd, all).unwrap_or(f64::NAN);
    f.expect(
        cem >= COVERAGE_BRACKET.0 && cem <= COVERAGE_BRACKET.1,
        || format!("CEM_ORD coverage {cem:.3} outside [{}, {}]", COVERAGE_BRACKET.0, COVERAGE_BRACKET.1),
    );
    let mut others = Vec::new();
    for m in [MetricId::Accuracy, MetricId::KendallTauA, MetricId::MutualInformation, MetricId::CemFlat] {
        let c = coverage(report, m, all).unwrap_or(f64::NAN);
        others.push(format!("{m} {c:.3}"));
        f.expect(cem > c, || format!("all systems: CEM_ORD {cem:.3} <= {m} {c:.3}"));
    }
    f.expect(report.columns.len() == 6, || format!("{} coverage columns", report.columns.len()));
    for (i, column) in report.columns.iter().enumerate().skip(1) {
        let ord = coverage(report, MetricId::CemOrd, i).unwrap_or(f64::NAN);
        let flat = coverage(report, MetricId::CemFlat, i).unwrap_or(f64::NAN);
        f.expect(ord > flat, || format!("{column}: CEM_ORD {ord:.3} <= CEM_flat {flat:.3}"));
    }
    f.into_check(
        7,
        "synthetic coverage",
        format!("CEM_ORD {cem:.3} vs {}; ahead of CEM_flat in every column", others.join(", ")),
    )
}

pub fn criterion_8(report: &MetaReport) -> Check {
    let get = |m| report.row(m).and_then(|r| r.robustness.value()).unwrap_or(f64::NAN);
    let (ord, flat) = (get(MetricId::CemOrd), get(MetricId::CemFlat));
    Check {
        criterion: 8,
        name: "synthetic robustness",
        pass: ord >= flat,
        detail: format!("CEM_ORD {ord:.4} vs CEM_flat {flat:.4}"),
    }
}

/// Reruns the audit and the meta-evaluation (including suite generation)
/// on a single thread and on `threads` threads and compares the serialized
/// reports byte for byte.
pub fn criterion_9(work: &Path, threads: usize) -> Check {
    let mut f = Findings::new();
    let pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool");
    let mut audits = Vec::new();
    let mut metas = Vec::new();
    for (i, n) in [1, threads].into_iter().enumerate() {
        pool(n).install(|| {
            audits.push(serde_json::to_vec_pretty(&run_audit()).unwrap());
            // same directory name, so the recorded input path agrees
            let dir = work.join(format!("run{i}")).join("suite");
            match run_metaeval(&dir) {
                Ok(out) => metas.push(serde_json::to_vec_pretty(&out.report).unwrap()),
                Err(e) => f.0.push(format!("meta-evaluation failed: {e}")),
            }
        });
    }
    f.expect(audits[0] == audits[1], || "audit reports differ across thread counts".into());
    f.expect(metas.len() == 2 && metas[0] == metas[1], || "meta reports differ across thread counts".into());
    let suites_equal = tree(&work.join("run0/suite")) == tree(&work.join("run1/suite"));
    f.expect(suites_equal, || "generated suites differ".into());
    f.into_check(
        9,
        "determinism",
        format!("audit, suite and meta report identical on 1 and {threads} threads"),
    )
}

fn tree(dir: &Path) -> Vec<(std::path::PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let Ok(entries) = std::fs::read_dir(&d) else { continue };
        for e in entries.flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if let Ok(bytes) = std::fs::read(&p) {
                files.push((p.strip_prefix(dir).unwrap().to_path_buf(), bytes));
            }
        }
    }
    files.sort();
    files
}
