//! Meta-evaluation: Unanimous Improvement Ratio, coverage and robustness.
//!
//! Everything works on a [`ScoreCube`] of per-case scores. A system's
//! aggregate score is the mean of its per-case scores; Spearman uses average
//! ranks for ties.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricId;
use crate::stats;

/// The set of reference metrics of the default synthetic experiment.
pub const DEFAULT_REFERENCE: [MetricId; 3] = [
    MetricId::Accuracy,
    MetricId::KendallTauA,
    MetricId::MutualInformation,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    pub reference: Vec<MetricId>,
    pub metrics: Vec<MetricId>,
}

impl MetaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reference.is_empty() {
            return Err(Error::InvalidConfig("reference metric set is empty".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig("no metrics to meta-evaluate".into()));
        }
        Ok(())
    }

    /// Evaluated metrics followed by any reference metric not among them.
    pub fn cube_metrics(&self) -> Vec<MetricId> {
        let mut all = self.metrics.clone();
        for &m in &self.reference {
            if !all.contains(&m) {
                all.push(m);
            }
        }
        all
    }
}

/// `score[system][case][metric]`, with undefined cells as `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreCube {
    systems: Vec<String>,
    cases: Vec<String>,
    metrics: Vec<MetricId>,
    cells: Vec<Option<f64>>,
}

impl ScoreCube {
    /// A cube with every cell undefined.
    pub fn new(systems: Vec<String>, cases: Vec<String>, metrics: Vec<MetricId>) -> Self {
        let len = systems.len() * cases.len() * metrics.len();
        Self {
            systems,
            cases,
            metrics,
            cells: alloc::vec![None; len],
        }
    }

    /// Cells in `[system][case][metric]` order.
    pub fn from_cells(
        systems: Vec<String>,
        cases: Vec<String>,
        metrics: Vec<MetricId>,
        cells: Vec<Option<f64>>,
    ) -> Result<Self> {
        let expected = systems.len() * cases.len() * metrics.len();
        if cells.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "score cube needs {expected} cells, got {}",
                cells.len()
            )));
        }
        Ok(Self {
            systems,
            cases,
            metrics,
            cells,
        })
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn cases(&self) -> &[String] {
        &self.cases
    }

    pub fn metrics(&self) -> &[MetricId] {
        &self.metrics
    }

    fn offset(&self, system: usize, case: usize, metric: usize) -> usize {
        (system * self.cases.len() + case) * self.metrics.len() + metric
    }

    pub fn get(&self, system: usize, case: usize, metric: usize) -> Option<f64> {
        self.cells[self.offset(system, case, metric)]
    }

    pub fn set(&mut self, system: usize, case: usize, metric: usize, value: Option<f64>) {
        let o = self.offset(system, case, metric);
        self.cells[o] = value;
    }

    pub fn metric_index(&self, metric: MetricId) -> Result<usize> {
        self.metrics
            .iter()
            .position(|&m| m == metric)
            .ok_or_else(|| Error::UnknownMetric(metric.as_str().to_string()))
    }

    pub fn system_index(&self, name: &str) -> Result<usize> {
        self.systems
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    fn defined(&self, system: usize, case: usize, metric: usize) -> Result<f64> {
        self.get(system, case, metric).ok_or_else(|| Error::UndefinedScore {
            system: self.systems[system].clone(),
            case: self.cases[case].clone(),
            metric: self.metrics[metric].as_str().to_string(),
        })
    }

    pub fn undefined_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    /// Replaces undefined cells with `value`; returns how many were replaced.
    pub fn fill_undefined(&mut self, value: f64) -> usize {
        let mut filled = 0;
        for c in self.cells.iter_mut().filter(|c| c.is_none()) {
            *c = Some(value);
            filled += 1;
        }
        filled
    }

    /// Undefined-cell counts per metric, in cube metric order.
    pub fn undefined_per_metric(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.metrics.len()];
        for (i, c) in self.cells.iter().enumerate() {
            if c.is_none() {
                counts[i % self.metrics.len()] += 1;
            }
        }
        counts
    }

    /// Cube over the given systems only, in the given order.
    pub fn restrict_systems(&self, keep: &[usize]) -> Self {
        let block = self.cases.len() * self.metrics.len();
        let mut cells = Vec::with_capacity(keep.len() * block);
        for &s in keep {
            cells.extend_from_slice(&self.cells[s * block..(s + 1) * block]);
        }
        Self {
            systems: keep.iter().map(|&s| self.systems[s].clone()).collect(),
            cases: self.cases.clone(),
            metrics: self.metrics.clone(),
            cells,
        }
    }

    /// Mean over cases of `metric` for `system`.
    pub fn mean_score(&self, system: usize, metric: usize) -> Result<f64> {
        let mut sum = 0.0;
        for case in 0..self.cases.len() {
            sum += self.defined(system, case, metric)?;
        }
        Ok(sum / self.cases.len() as f64)
    }
}

fn reference_indices(cube: &ScoreCube, reference: &[MetricId]) -> Result<Vec<usize>> {
    if reference.is_empty() {
        return Err(Error::InvalidConfig("reference metric set is empty".into()));
    }
    reference.iter().map(|&m| cube.metric_index(m)).collect()
}

fn uir_indices(cube: &ScoreCube, s: usize, t: usize, reference: &[usize]) -> Result<f64> {
    if cube.cases.is_empty() {
        return Err(Error::DegenerateInput("no test cases"));
    }
    let (mut wins, mut losses) = (0i64, 0i64);
    for case in 0..cube.cases.len() {
        let (mut ge, mut le) = (true, true);
        for &m in reference {
            let a = cube.defined(s, case, m)?;
            let b = cube.defined(t, case, m)?;
            ge &= a >= b;
            le &= b >= a;
        }
        wins += ge as i64;
        losses += le as i64;
    }
    Ok((wins - losses) as f64 / cube.cases.len() as f64)
}

/// Net fraction of cases on which `s` is at least as good as `s_prime` on
/// every reference metric.
pub fn uir(cube: &ScoreCube, s: usize, s_prime: usize, reference: &[MetricId]) -> Result<f64> {
    uir_indices(cube, s, s_prime, &reference_indices(cube, reference)?)
}

/// Unordered system pairs `(i, j)`, `i < j`.
pub fn system_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// UIR of every pair from [`system_pairs`].
pub fn pairwise_uir(cube: &ScoreCube, reference: &[MetricId]) -> Result<Vec<f64>> {
    let refs = reference_indices(cube, reference)?;
    system_pairs(cube.systems.len())
        .into_iter()
        .map(|(i, j)| uir_indices(cube, i, j, &refs))
        .collect()
}

fn coverage_with(cube: &ScoreCube, metric: usize, uirs: &[f64]) -> Result<f64> {
    let means = (0..cube.systems.len())
        .map(|s| cube.mean_score(s, metric))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = system_pairs(cube.systems.len())
        .into_iter()
        .map(|(i, j)| means[i] - means[j])
        .collect();
    stats::spearman(&diffs, uirs).ok_or(Error::DegenerateInput(
        "constant score differences or UIR values across system pairs",
    ))
}

/// Spearman correlation, over system pairs, between the difference of mean
/// scores under `metric` and the UIR under `reference`.
pub fn coverage(cube: &ScoreCube, metric: MetricId, reference: &[MetricId]) -> Result<f64> {
    if cube.systems.len() < 2 {
        return Err(Error::DegenerateInput("coverage needs at least two systems"));
    }
    let uirs = pairwise_uir(cube, reference)?;
    coverage_with(cube, cube.metric_index(metric)?, &uirs)
}

/// Mean, over unordered pairs of cases, of the Spearman correlation between
/// the system rankings `metric` induces on the two cases.
pub fn robustness(cube: &ScoreCube, metric: MetricId) -> Result<f64> {
    if cube.cases.len() < 2 || cube.systems.len() < 2 {
        return Err(Error::DegenerateInput(
            "robustness needs at least two cases and two systems",
        ));
    }
    let m = cube.metric_index(metric)?;
    let per_case = (0..cube.cases.len())
        .map(|c| {
            (0..cube.systems.len())
                .map(|s| cube.defined(s, c, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = system_pairs(cube.cases.len());
    let mut sum = 0.0;
    for &(a, b) in &pairs {
        sum += stats::spearman(&per_case[a], &per_case[b])
            .ok_or(Error::DegenerateInput("constant system ranking on a test case"))?;
    }
    Ok(sum / pairs.len() as f64)
}

/// A report cell: a value, or why there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Value(f64),
    Undefined { undefined: String },
}

impl Cell {
    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Cell::Value(v),
            Err(e) => Cell::Undefined {
                undefined: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Undefined { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaRow {
    pub metric: MetricId,
    /// One cell per column of [`MetaReport::columns`].
    pub coverage: Vec<Cell>,
    pub robustness: Cell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaReport {
    pub reference: Vec<MetricId>,
    /// How a system's per-case scores are aggregated for coverage.
    pub aggregate: String,
    pub systems: usize,
    pub cases: usize,
    /// Undefined cells scored as zero, per metric (omitted when none).
    pub undefined_cells: Vec<(MetricId, usize)>,
    pub columns: Vec<String>,
    pub rows: Vec<MetaRow>,
}

impl MetaReport {
    pub fn row(&self, metric: MetricId) -> Option<&MetaRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn column_index(&self, column: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == column)
    }
}

pub const ALL_SYSTEMS_COLUMN: &str = "all systems";

/// Coverage of every metric over all systems and with each system family
/// left out, plus robustness over all systems. `family_of` maps a system
/// name to its family; families appear as columns in order of first
/// appearance. Undefined cells in `cube` must already be filled; the
/// `undefined_cells` counts are recorded as given.
pub fn meta_report(
    cube: &ScoreCube,
    config: &MetaConfig,
    family_of: impl Fn(&str) -> Option<String>,
    undefined_cells: Vec<(MetricId, usize)>,
) -> Result<MetaReport> {
    config.validate()?;
    reference_indices(cube, &config.reference)?;
    let mut families: Vec<String> = Vec::new();
    let labels: Vec<Option<String>> = cube.systems.iter().map(|s| family_of(s)).collect();
    for f in labels.iter().flatten() {
        if !families.contains(f) {
            families.push(f.clone());
        }
    }

    let mut columns = alloc::vec![ALL_SYSTEMS_COLUMN.to_string()];
    let mut subsets = alloc::vec![cube.clone()];
    // leaving out the only family would leave nothing to compare
    if families.len() > 1 {
        for f in &families {
            let keep: Vec<usize> = (0..cube.systems.len())
                .filter(|&s| labels[s].as_ref() != Some(f))
                .collect();
            columns.push(format!("minus {f}"));
            subsets.push(cube.restrict_systems(&keep));
        }
    }

    let uirs: Vec<Result<Vec<f64>>> = subsets
        .iter()
        .map(|c| {
            if c.systems.len() < 2 {
                Err(Error::DegenerateInput("coverage needs at least two systems"))
            } else {
                pairwise_uir(c, &config.reference)
            }
        })
        .collect();

    let rows = config
        .metrics
        .iter()
        .map(|&metric| {
            let m = cube.metric_index(metric)?;
            let coverage = subsets
                .iter()
                .zip(&uirs)
                .map(|(c, u)| {
                    Cell::from_result(match u {
                        Ok(u) => coverage_with(c, m, u),
                        Err(e) => Err(e.clone()),
                    })
                })
                .collect();
            Ok(MetaRow {
                metric,
                coverage,
                robustness: Cell::from_result(robustness(cube, metric)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MetaReport {
        reference: config.reference.clone(),
        aggregate: "mean over test cases".into(),
        systems: cube.systems.len(),
        cases: cube.cases.len(),
        undefined_cells,
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// cube[system][case] for a single metric (accuracy).
    fn single(scores: &[&[f64]]) -> ScoreCube {
        let cells = scores.iter().flat_map(|s| s.iter().map(|&v| Some(v))).collect();
        ScoreCube::from_cells(
            names("s", scores.len()),
            names("t", scores[0].len()),
            vec![MetricId::Accuracy],
            cells,
        )
        .unwrap()
    }

    #[test]
    fn uir_trivial_cases() {
        let cube = single(&[&[0.9, 0.8, 0.7], &[0.5, 0.4, 0.3]]);
        let r = [MetricId::Accuracy];
        assert_eq!(uir(&cube, 0, 1, &r).unwrap(), 1.0);
        assert_eq!(uir(&cube, 1, 0, &r).unwrap(), -1.0);
        assert_eq!(uir(&cube, 0, 0, &r).unwrap(), 0.0);
    }

    #[test]
    fn uir_with_disagreeing_reference_metrics() {
        // s wins unanimously on cases 0 and 1, metrics disagree on case 2
        let metrics = vec![MetricId::Accuracy, MetricId::Mae];
        let cells = vec![
            // s
            Some(0.9), Some(0.9), Some(0.9), Some(0.9), Some(0.9), Some(0.1),
            // s'
            Some(0.1), Some(0.1), Some(0.1), Some(0.1), Some(0.1), Some(0.9),
        ];
        let cube = ScoreCube::from_cells(names("s", 2), names("t", 3), metrics.clone(), cells).unwrap();
        assert!((uir(&cube, 0, 1, &metrics).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn undefined_cells_are_reported() {
        let mut cube = single(&[&[0.9, 0.8], &[0.5, 0.4]]);
        cube.set(1, 1, 0, None);
        assert!(matches!(
            uir(&cube, 0, 1, &[MetricId::Accuracy]),
            Err(Error::UndefinedScore { .. })
        ));
        assert_eq!(cube.undefined_per_metric(), vec![1]);
        assert_eq!(cube.fill_undefined(0.0), 1);
        assert_eq!(cube.get(1, 1, 0), Some(0.0));
    }

    #[test]
    fn coverage_of_the_sole_reference_tracks_difference_signs() {
        // consistent across cases: every UIR is the sign of the mean difference,
        // so coverage is the rank correlation between differences and their signs
        let cube = single(&[&[0.9, 0.8], &[0.5, 0.4], &[0.7, 0.6], &[0.1, 0.2]]);
        let means = [0.85, 0.45, 0.65, 0.15];
        let diffs: Vec<f64> = system_pairs(4).into_iter().map(|(i, j)| means[i] - means[j]).collect();
        let signs: Vec<f64> = diffs.iter().map(|d| d.signum()).collect();
        assert_eq!(pairwise_uir(&cube, &[MetricId::Accuracy]).unwrap(), signs);
        let got = coverage(&cube, MetricId::Accuracy, &[MetricId::Accuracy]).unwrap();
        assert!((got - stats::spearman(&diffs, &signs).unwrap()).abs() < 1e-12);
        assert!(got > 0.0);
    }

    #[test]
    fn coverage_three_system_fixture() {
        // reference: accuracy; evaluated: mae column
        let metrics = vec![MetricId::Accuracy, MetricId::Mae];
        let sys: [[(f64, f64); 2]; 3] = [
            [(0.9, 0.2), (0.8, 0.1)],
            [(0.5, 0.3), (0.6, 0.9)],
            [(0.7, 0.5), (0.4, 0.0)],
        ];
        let cells = sys
            .iter()
            .flat_map(|s| s.iter().flat_map(|&(a, b)| [Some(a), Some(b)]))
            .collect();
        let cube = ScoreCube::from_cells(names("s", 3), names("t", 2), metrics, cells).unwrap();
        // pairs (0,1),(0,2),(1,2): uir = 1, 1, 0 ; mae mean diffs = -0.45, -0.1, 0.35
        let expected = stats::spearman(&[-0.45, -0.1, 0.35], &[1.0, 1.0, 0.0]).unwrap();
        let got = coverage(&cube, MetricId::Mae, &[MetricId::Accuracy]).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn robustness_trivial_cases() {
        let same = single(&[&[0.9, 0.9, 0.9], &[0.5, 0.5, 0.5], &[0.1, 0.1, 0.1]]);
        assert_eq!(robustness(&same, MetricId::Accuracy).unwrap(), 1.0);
        let reversed = single(&[&[0.9, 0.1], &[0.5, 0.5], &[0.1, 0.9]]);
        assert_eq!(robustness(&reversed, MetricId::Accuracy).unwrap(), -1.0);
        let constant = single(&[&[0.5, 0.1], &[0.5, 0.9]]);
        assert!(matches!(
            robustness(&constant, MetricId::Accuracy),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn report_has_a_column_per_left_out_family() {
        let cube = single(&[&[0.9, 0.8], &[0.5, 0.4], &[0.7, 0.6], &[0.1, 0.3]]);
        let config = MetaConfig {
            reference: vec![MetricId::Accuracy],
            metrics: vec![MetricId::Accuracy],
        };
        let family = |s: &str| Some(String::from(if s < "s2" { "a" } else { "b" }));
        let report = meta_report(&cube, &config, family, vec![]).unwrap();
        assert_eq!(report.columns, vec!["all systems", "minus a", "minus b"]);
        assert_eq!(report.rows.len(), 1);
        // two systems left: a single pair, Spearman undefined
        assert!(report.rows[0].coverage[1].value().is_none());
    }
}
