//! Score cube filling and meta-evaluation of a loaded suite.

use ordeval_core::baselines::Labels;
use ordeval_core::meta::{meta_report, MetaConfig, MetaReport, ScoreCube};
use ordeval_core::metrics::{score_labels, MetricId, MetricParams};
use ordeval_core::scale::ordinal_positions;
use ordeval_core::ErrorKind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::suite::Suite;

/// Scores every system on every case. Cells where a metric is undefined
/// (degenerate input such as a constant output under a correlation) are
/// left empty; any other failure aborts.
pub fn score_cube(suite: &Suite, metrics: &[MetricId], params: &MetricParams) -> Result<ScoreCube> {
    let values = ordinal_positions(suite.scale.len());
    let per_case: Vec<Vec<Option<f64>>> = suite
        .cases
        .par_iter()
        .map(|case| -> Result<Vec<Option<f64>>> {
            let gold = case.dataset.gold();
            let mut cells = Vec::with_capacity(suite.systems.len() * metrics.len());
            for system in &suite.systems {
                let labels = Labels::new(gold, case.dataset.system(system)?, &values)?;
                for &m in metrics {
                    cells.push(match score_labels(m, &labels, params) {
                        Ok(v) => Some(v),
                        Err(e) if e.kind() == ErrorKind::Degenerate => None,
                        Err(e) => return Err(e.into()),
                    });
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;

    // per_case is [case][system][metric]; the cube wants [system][case][metric]
    let block = metrics.len();
    let mut cells = Vec::with_capacity(suite.cases.len() * suite.systems.len() * block);
    for s in 0..suite.systems.len() {
        for case in &per_case {
            cells.extend_from_slice(&case[s * block..(s + 1) * block]);
        }
    }
    Ok(ScoreCube::from_cells(
        suite.systems.clone(),
        suite.cases.iter().map(|c| c.name.clone()).collect(),
        metrics.to_vec(),
        cells,
    )?)
}

/// Family of a system: its name up to the first `_` (`maj_0.3` -> `maj`).
pub fn family_of(system: &str) -> Option<String> {
    system.split('_').next().filter(|f| !f.is_empty()).map(str::to_string)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaOutput {
    pub input: String,
    pub params: std::collections::BTreeMap<String, String>,
    pub undefined_cell_rule: String,
    #[serde(flatten)]
    pub report: MetaReport,
}

pub fn metaeval(suite: &Suite, config: &MetaConfig, params: &MetricParams) -> Result<MetaOutput> {
    config.validate()?;
    let metrics = config.cube_metrics();
    let mut cube = score_cube(suite, &metrics, params)?;
    let undefined: Vec<(MetricId, usize)> = metrics
        .iter()
        .copied()
        .zip(cube.undefined_per_metric())
        .filter(|&(_, n)| n > 0)
        .collect();
    for (m, n) in &undefined {
        log::warn!("{m}: {n} undefined cells scored as 0");
    }
    cube.fill_undefined(0.0);
    let report = meta_report(&cube, config, family_of, undefined)?;
    Ok(MetaOutput {
        input: suite.dir.display().to_string(),
        params: params.to_map(),
        undefined_cell_rule: "undefined scores count as 0".into(),
        report,
    })
}
