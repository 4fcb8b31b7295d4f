//! Parallel driver for the property audit.
//!
//! Trials are evaluated in fixed-size chunks; a chunk runs in parallel and
//! the chunks run in order, stopping after the first chunk that contains a
//! violation. Outcomes are then folded in trial order, so the verdict, the
//! trial counts and the reported counterexample are those of a sequential
//! run, whatever the number of threads.

use ordeval_core::metrics::{registry_fingerprint, MetricId};
use ordeval_core::properties::{
    self, fold_outcomes, AuditOptions, AuditVerdict, PropertyId, Table1Mismatch, TrialOutcome,
};
use rayon::prelude::*;
use serde::Serialize;

const CHUNK: u64 = 256;

pub fn audit_property(
    metric: MetricId,
    property: PropertyId,
    trials: u64,
    seed: u64,
    options: &AuditOptions,
) -> AuditVerdict {
    let probe = properties::run_probe(metric, property, options);
    let mut outcomes: Vec<TrialOutcome> = Vec::new();
    if !matches!(probe, TrialOutcome::Violated(_)) {
        let mut start = 0;
        while start < trials {
            let end = (start + CHUNK).min(trials);
            let chunk: Vec<TrialOutcome> = (start..end)
                .into_par_iter()
                .map(|t| properties::run_trial(metric, property, seed, t, options))
                .collect();
            let hit = chunk.iter().any(|o| matches!(o, TrialOutcome::Violated(_)));
            outcomes.extend(chunk);
            if hit {
                break;
            }
            start = end;
        }
    }
    fold_outcomes(metric, property, trials, probe, outcomes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub trials: u64,
    pub allow_empty_gold_classes: bool,
    pub registry_fingerprint: String,
    pub verdicts: Vec<AuditVerdict>,
    /// Verdicts that disagree with the reference constraint table.
    pub table1_mismatches: Vec<Table1Mismatch>,
}

/// Audits every metric against every property, metric-major.
pub fn audit(metrics: &[MetricId], trials: u64, seed: u64, options: &AuditOptions) -> AuditReport {
    let jobs: Vec<(MetricId, PropertyId)> = metrics
        .iter()
        .flat_map(|&m| PropertyId::ALL.into_iter().map(move |p| (m, p)))
        .collect();
    let verdicts: Vec<AuditVerdict> = jobs
        .par_iter()
        .map(|&(m, p)| {
            let v = audit_property(m, p, trials, seed, options);
            log::debug!("{} {}: {:?} after {} trials", m, p.as_str(), v.verdict, v.trials_run);
            v
        })
        .collect();
    let table1_mismatches = properties::table1_mismatches(&verdicts);
    AuditReport {
        seed,
        trials,
        allow_empty_gold_classes: options.allow_empty_gold_classes,
        registry_fingerprint: registry_fingerprint(),
        verdicts,
        table1_mismatches,
    }
}
