//! Hand-worked values, pinned to the precision they are quoted at.

use ordeval_core::baselines::Labels;
use ordeval_core::cem::{cem, cem_flat, ProximityTable, ScaleType};
use ordeval_core::metrics::{score, score_labels, MetricId, MetricParams};
use ordeval_core::scale::ordinal_positions;
use ordeval_core::{GoldDistribution, LabeledDataset, OrdinalScale};

const TWO_DECIMALS: f64 = 0.005;

/// Dataset whose confusion matrices (rows: system class, columns: gold
/// class) are the given ones.
fn from_confusions(classes: &[&str], systems: &[(&str, [[usize; 3]; 3])]) -> LabeledDataset {
    let scale = OrdinalScale::new(classes.iter().copied()).unwrap();
    // all systems share the gold column sums; emit items gold-major
    let mut gold = Vec::new();
    let mut outputs: Vec<Vec<usize>> = vec![Vec::new(); systems.len()];
    let (_, first) = systems[0];
    for g in 0..3 {
        let n: usize = (0..3).map(|s| first[s][g]).sum();
        gold.extend(std::iter::repeat(g).take(n));
        for (k, (_, m)) in systems.iter().enumerate() {
            assert_eq!((0..3).map(|s| m[s][g]).sum::<usize>(), n);
            for s in 0..3 {
                outputs[k].extend(std::iter::repeat(s).take(m[s][g]));
            }
        }
    }
    let mut ds = LabeledDataset::from_gold_indices(scale, gold).unwrap();
    for ((name, _), out) in systems.iter().zip(outputs) {
        ds = ds.with_system_indices(*name, out).unwrap();
    }
    ds
}

fn sentiment() -> LabeledDataset {
    from_confusions(
        &["neg", "neu", "pos"],
        &[
            ("A", [[5, 5, 7], [1, 50, 8], [4, 5, 15]]),
            ("B", [[7, 12, 4], [1, 45, 8], [2, 3, 18]]),
        ],
    )
}

#[test]
fn sentiment_proximity_table() {
    let table = ProximityTable::build(&GoldDistribution::from_counts(vec![10, 60, 30]).unwrap()).unwrap();
    let expected = [[4.32, 0.62, 0.07], [1.32, 1.74, 0.74], [0.23, 0.42, 2.74]];
    for s in 0..3 {
        for g in 0..3 {
            assert!((table.prox(s, g) - expected[s][g]).abs() < TWO_DECIMALS, "prox({s},{g})");
        }
    }
}

#[test]
fn sentiment_scores() {
    let ds = sentiment();
    assert!((cem(ScaleType::Ord, &ds, "A").unwrap() - 0.71).abs() < TWO_DECIMALS);
    assert!((cem(ScaleType::Ord, &ds, "B").unwrap() - 0.76).abs() < TWO_DECIMALS);
    let params = MetricParams::default();
    assert_eq!(score(MetricId::Accuracy, &ds, "A", &params).unwrap(), 0.70);
    assert_eq!(score(MetricId::Accuracy, &ds, "B", &params).unwrap(), 0.70);
}

#[test]
fn sentiment_flat_ablation() {
    // hand evaluation of sum(count * (1 - P)) / sum(n_g * (1 - P_gg)) over the
    // (10, 60, 30) closeness probabilities
    let ds = sentiment();
    let a = cem_flat(&ds, "A").unwrap();
    let b = cem_flat(&ds, "B").unwrap();
    assert!((a - 0.7824675324675325).abs() < 1e-12);
    assert!((b - 0.8142857142857142).abs() < 1e-12);
    assert!(b > a);
}

#[test]
fn review_score_proximities() {
    // reject, weak_reject, undecided, weak_accept, accept
    let left = ProximityTable::build(&GoldDistribution::from_counts(vec![7, 105, 193, 90, 7]).unwrap()).unwrap();
    let right = ProximityTable::build(&GoldDistribution::from_counts(vec![176, 10, 3, 10, 177]).unwrap()).unwrap();
    let tol = 0.01;
    assert!((left.prox(3, 1) - 0.23).abs() < tol);
    assert!((right.prox(3, 1) - 4.38).abs() < tol);
    assert!((left.prox(0, 0) - 6.84).abs() < tol);
    assert!((left.prox(2, 2) - 2.06).abs() < tol);
}

fn pair(metric: MetricId) -> (f64, f64) {
    // gold (1,1,2,3); outputs (1,2,2,3) and (1,1,2,2)
    let gold = [0, 0, 1, 2];
    let values = ordinal_positions(3);
    let params = MetricParams::default();
    let s = |sys: &[usize]| score_labels(metric, &Labels::new(&gold, sys, &values).unwrap(), &params).unwrap();
    (s(&[0, 1, 1, 2]), s(&[0, 0, 1, 1]))
}

#[test]
fn imbalance_counterexamples() {
    assert_eq!(pair(MetricId::Accuracy), (0.75, 0.75));
    assert_eq!(pair(MetricId::AccWithinN), (1.0, 1.0));
    assert_eq!(pair(MetricId::Mae), (-0.25, -0.25));
    assert_eq!(pair(MetricId::Mse), (-0.25, -0.25));
    let (c1, c2) = pair(MetricId::Cosine);
    assert!((c1 - 0.973).abs() < 0.001 && (c2 - 0.979).abs() < 0.001, "{c1} {c2}");
    let (p1, p2) = pair(MetricId::Pearson);
    assert!((p1 - 0.85).abs() < 0.005 && (p2 - 0.90).abs() < 0.005, "{p1} {p2}");
}

#[test]
fn monotonicity_and_invariance_counterexamples() {
    let gold = [2, 3, 4];
    let values = ordinal_positions(5);
    let cubic: Vec<f64> = values.iter().map(|x| 10.0 + x * x * x).collect();
    let params = MetricParams::default();
    let s = |m, sys: &[usize], v: &[f64]| score_labels(m, &Labels::new(&gold, sys, v).unwrap(), &params).unwrap();
    // kappa is not in this list: its chance term moves with the predicted marginals
    for m in [MetricId::Accuracy, MetricId::MacroF1, MetricId::Pearson, MetricId::Spearman, MetricId::KendallTauA] {
        assert_eq!(s(m, &[0, 1, 2], &values), s(m, &[1, 2, 3], &values), "{m}");
    }
    for m in [MetricId::Pearson, MetricId::Mae, MetricId::Mse, MetricId::MacroMae] {
        assert_ne!(s(m, &[0, 1, 2], &values), s(m, &[0, 1, 2], &cubic), "{m}");
    }
}

#[test]
fn macro_mae_hand_computed() {
    // per gold class mean absolute errors: class 1 -> (0+1+2)/3, class 2 -> 0, class 3 -> 2
    let gold = [0, 0, 0, 1, 2];
    let sys = [0, 1, 2, 1, 0];
    let values = ordinal_positions(3);
    let l = Labels::new(&gold, &sys, &values).unwrap();
    let params = MetricParams::default();
    assert_eq!(score_labels(MetricId::MacroMae, &l, &params).unwrap(), -1.0);
    // squared: (0+1+4)/3, 0, 4
    let expected = -((5.0 / 3.0) + 0.0 + 4.0) / 3.0;
    assert!((score_labels(MetricId::MacroMse, &l, &params).unwrap() - expected).abs() < 1e-12);
    assert!((score_labels(MetricId::Mae, &l, &params).unwrap() + 1.0).abs() < 1e-12);
}
