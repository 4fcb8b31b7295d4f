use ordeval_core::baselines::Labels;
use ordeval_core::cem::{self, EmptyClassPolicy, ScaleType};
use ordeval_core::meta::{self, MetaConfig, ScoreCube};
use ordeval_core::metrics::{score, score_labels, MetricId, MetricParams};
use ordeval_core::scale::ordinal_positions;
use ordeval_core::{LabeledDataset, OrdinalScale};
use proptest::prelude::*;

/// (classes, gold with every class populated, system output)
fn populated_dataset() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (2usize..=7).prop_flat_map(|k| {
        (k..=40).prop_flat_map(move |n| {
            (
                Just(k),
                prop::collection::vec(0..k, n - k),
                prop::collection::vec(0..k, n),
                any::<prop::sample::Index>(),
            )
                .prop_map(|(k, rest, system, rot)| {
                    let mut gold: Vec<usize> = (0..k).collect();
                    gold.extend(rest);
                    let r = rot.index(gold.len());
                    gold.rotate_left(r);
                    (k, gold, system)
                })
        })
    })
}

fn ord(gold: &[usize], system: &[usize], k: usize) -> f64 {
    cem::cem_labels(ScaleType::Ord, gold, system, &ordinal_positions(k), EmptyClassPolicy::Reject).unwrap()
}

proptest! {
    #[test]
    fn confusion_columns_are_the_gold_distribution((k, gold, system) in populated_dataset()) {
        let ds = LabeledDataset::from_gold_indices(OrdinalScale::numbered(k).unwrap(), gold.clone())
            .unwrap()
            .with_system_indices("s", system)
            .unwrap();
        let cm = ds.confusion_matrix("s").unwrap();
        let dist = ds.gold_distribution();
        prop_assert_eq!(cm.column_sums(), dist.counts().to_vec());
        prop_assert_eq!(cm.total(), gold.len() as u64);
    }

    #[test]
    fn label_based_cem_ignores_class_values((k, gold, system) in populated_dataset(), gaps in prop::collection::vec(1u32..50, 7)) {
        let mut v = 0.0;
        let warped: Vec<f64> = gaps[..k].iter().map(|&g| { v += g as f64; v }).collect();
        let identity = ordinal_positions(k);
        for scale in [ScaleType::Ord, ScaleType::Nom] {
            let a = cem::cem_labels(scale, &gold, &system, &identity, EmptyClassPolicy::Reject).unwrap();
            let b = cem::cem_labels(scale, &gold, &system, &warped, EmptyClassPolicy::Reject).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn renaming_classes_keeps_scores_bit_identical((k, gold, system) in populated_dataset()) {
        let scale = OrdinalScale::numbered(k).unwrap();
        let renamed = scale.relabel(|i, _| format!("level-{:03}", i * 7 + 2)).unwrap();
        let build = |scale: OrdinalScale| {
            let rows: Vec<(String, String)> = gold.iter().enumerate()
                .map(|(d, &g)| (format!("d{d}"), scale.label(g).unwrap().to_string())).collect();
            let sys: Vec<(String, String)> = system.iter().enumerate()
                .map(|(d, &s)| (format!("d{d}"), scale.label(s).unwrap().to_string())).collect();
            LabeledDataset::new(scale, rows).unwrap().with_system("s", sys).unwrap()
        };
        let (a, b) = (build(scale), build(renamed));
        for m in [MetricId::CemOrd, MetricId::CemNom, MetricId::CemFlat] {
            let p = MetricParams::default();
            prop_assert_eq!(score(m, &a, "s", &p).unwrap().to_bits(), score(m, &b, "s", &p).unwrap().to_bits());
        }
    }

    #[test]
    fn cem_lies_in_unit_interval((k, gold, system) in populated_dataset()) {
        let values = ordinal_positions(k);
        for scale in [ScaleType::Ord, ScaleType::Nom, ScaleType::Int] {
            let c = cem::cem_labels(scale, &gold, &system, &values, EmptyClassPolicy::Reject).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert_eq!(c == 1.0, gold == system);
        }
        let f = cem::cem_flat_labels(&gold, &system, k, EmptyClassPolicy::Reject).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert_eq!(f == 1.0, gold == system);
    }

    #[test]
    fn single_step_toward_gold_raises_ordinal_cem((k, gold, system) in populated_dataset(), pick in any::<prop::sample::Index>()) {
        let wrong: Vec<usize> = (0..gold.len()).filter(|&d| gold[d] != system[d]).collect();
        prop_assume!(!wrong.is_empty());
        let d = wrong[pick.index(wrong.len())];
        let mut better = system.clone();
        better[d] = if system[d] > gold[d] { system[d] - 1 } else { system[d] + 1 };
        prop_assert!(ord(&gold, &better, k) > ord(&gold, &system, k));
    }

    #[test]
    fn small_class_errors_cost_more((k, gold, _) in populated_dataset(), c in 0usize..5) {
        prop_assume!(k >= 3);
        let c = c % (k - 2);
        let n = |x: usize| gold.iter().filter(|&&g| g == x).count();
        prop_assume!(n(c) != n(c + 2));
        let (c1, c3) = if n(c) > n(c + 2) { (c, c + 2) } else { (c + 2, c) };
        let move_one = |from: usize| {
            let mut s = gold.clone();
            let d = s.iter().position(|&g| g == from).unwrap();
            s[d] = c + 1;
            s
        };
        prop_assert!(ord(&gold, &move_one(c1), k) > ord(&gold, &move_one(c3), k));
        let (n1, n2, n3) = (n(c1) as f64, n(c + 1) as f64, n(c3) as f64);
        let closed = ((n1 / 2.0) * (n3 + n2 / 2.0) / ((n1 + n2 / 2.0) * (n3 / 2.0))).log2();
        prop_assert!(closed > 0.0);
    }

    #[test]
    fn registered_scores_are_finite((k, gold, system) in populated_dataset()) {
        let values = ordinal_positions(k);
        let l = Labels::new(&gold, &system, &values).unwrap();
        for &m in MetricId::ALL {
            if let Ok(v) = score_labels(m, &l, &MetricParams::default()) {
                prop_assert!(v.is_finite(), "{} gave {}", m, v);
            }
        }
    }
}

fn cube_strategy() -> impl Strategy<Value = ScoreCube> {
    (2usize..7, 2usize..6).prop_flat_map(|(systems, cases)| {
        prop::collection::vec(prop::sample::select(vec![0.0, 0.25, 0.5, 0.75, 1.0, 0.1, 0.9]), systems * cases * 2)
            .prop_map(move |cells| {
                ScoreCube::from_cells(
                    (0..systems).map(|s| format!("{}_{s}", if s % 2 == 0 { "even" } else { "odd" })).collect(),
                    (0..cases).map(|c| format!("t{c}")).collect(),
                    vec![MetricId::Accuracy, MetricId::CemOrd],
                    cells.into_iter().map(Some).collect(),
                )
                .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn uir_is_antisymmetric_and_bounded(cube in cube_strategy()) {
        let r = [MetricId::Accuracy, MetricId::CemOrd];
        for i in 0..cube.systems().len() {
            for j in 0..cube.systems().len() {
                let a = meta::uir(&cube, i, j, &r).unwrap();
                let b = meta::uir(&cube, j, i, &r).unwrap();
                prop_assert_eq!(a + b, 0.0);
                prop_assert!(a.abs() <= 1.0);
            }
        }
    }

    #[test]
    fn coverage_ignores_positive_rescaling(cube in cube_strategy(), exp in -6i32..7) {
        // powers of two keep tied mean differences tied in floating point
        let scale = 2f64.powi(exp);
        let mut rescaled = cube.clone();
        for s in 0..cube.systems().len() {
            for c in 0..cube.cases().len() {
                rescaled.set(s, c, 1, cube.get(s, c, 1).map(|v| v * scale));
            }
        }
        let r = [MetricId::Accuracy];
        let a = meta::coverage(&cube, MetricId::CemOrd, &r);
        let b = meta::coverage(&rescaled, MetricId::CemOrd, &r);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
        if let (Ok(a), Ok(b)) = (meta::robustness(&cube, MetricId::CemOrd), meta::robustness(&rescaled, MetricId::CemOrd)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn left_out_columns_match_cubes_built_from_the_subset(cube in cube_strategy()) {
        let config = MetaConfig { reference: vec![MetricId::Accuracy], metrics: vec![MetricId::CemOrd] };
        let family = |s: &str| s.split('_').next().map(str::to_string);
        let report = meta::meta_report(&cube, &config, family, vec![]).unwrap();
        for (col, name) in report.columns.iter().enumerate().skip(1) {
            let left_out = name.trim_start_matches("minus ");
            let keep: Vec<usize> = (0..cube.systems().len())
                .filter(|&s| !cube.systems()[s].starts_with(left_out))
                .collect();
            // rebuild from raw cells rather than restrict_systems
            let mut cells = Vec::new();
            for &s in &keep {
                for c in 0..cube.cases().len() {
                    for m in 0..2 {
                        cells.push(cube.get(s, c, m));
                    }
                }
            }
            let sub = ScoreCube::from_cells(
                keep.iter().map(|&s| cube.systems()[s].clone()).collect(),
                cube.cases().to_vec(),
                cube.metrics().to_vec(),
                cells,
            ).unwrap();
            let direct = meta::coverage(&sub, MetricId::CemOrd, &config.reference).ok();
            prop_assert_eq!(report.rows[0].coverage[col].value(), direct);
        }
    }
}
