//! Plain-text tables. Presentation only; JSON is the machine format.

use std::fmt::Write as _;

use ordeval_core::meta::{Cell, MetaReport};
use ordeval_core::properties::{table1_expectation, PropertyId, Verdict};
use ordeval_core::report::MetricReport;

use crate::audit::AuditReport;

pub fn evaluation_table(reports: &[MetricReport]) -> String {
    let mut out = String::new();
    let Some(first) = reports.first() else {
        return out;
    };
    let metrics: Vec<&String> = first.scores.keys().collect();
    let width = reports.iter().map(|r| r.system.len()).max().unwrap_or(6).max(6);
    let _ = write!(out, "{:<width$}", "system");
    for m in &metrics {
        let _ = write!(out, "  {:>w$}", m, w = m.len().max(8));
    }
    out.push('\n');
    for r in reports {
        let _ = write!(out, "{:<width$}", r.system);
        for m in &metrics {
            let _ = write!(out, "  {:>w$.4}", r.scores[*m], w = m.len().max(8));
        }
        out.push('\n');
    }
    out
}

fn mark(satisfied: bool) -> &'static str {
    if satisfied {
        "yes"
    } else {
        "no"
    }
}

/// One row per metric: whether each property held, and the reference
/// expectation where it differs.
pub fn audit_table(report: &AuditReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<26}{:>12}{:>14}{:>11}   trials={} seed={}",
        "metric", "invariance", "monotonicity", "imbalance", report.trials, report.seed
    );
    for chunk in report.verdicts.chunks(PropertyId::ALL.len()) {
        let metric = chunk[0].metric;
        let expected = table1_expectation(metric);
        let _ = write!(out, "{:<26}", metric.as_str());
        for (i, (v, w)) in chunk.iter().zip([12, 14, 11]).enumerate() {
            let satisfied = v.verdict == Verdict::NoViolationFound;
            let cell = match expected {
                Some(e) if e[i] != satisfied => format!("{}*", mark(satisfied)),
                _ => mark(satisfied).to_string(),
            };
            let _ = write!(out, "{cell:>w$}");
        }
        out.push('\n');
    }
    if !report.table1_mismatches.is_empty() {
        let _ = writeln!(
            out,
            "* differs from the reference table ({} cells)",
            report.table1_mismatches.len()
        );
    }
    out
}

fn cell(c: &Cell) -> String {
    match c.value() {
        Some(v) => format!("{v:.3}"),
        None => "-".into(),
    }
}

/// Coverage per column plus robustness, one row per metric.
pub fn meta_table(report: &MetaReport) -> String {
    let mut out = String::new();
    let widths: Vec<usize> = report.columns.iter().map(|c| c.len().max(6)).collect();
    let _ = write!(out, "{:<26}", "metric");
    for (c, w) in report.columns.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    let _ = writeln!(out, "  {:>10}", "robustness");
    for row in &report.rows {
        let _ = write!(out, "{:<26}", row.metric.as_str());
        for (c, w) in row.coverage.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", cell(c));
        }
        let _ = writeln!(out, "  {:>10}", cell(&row.robustness));
    }
    let reference: Vec<&str> = report.reference.iter().map(|m| m.as_str()).collect();
    let _ = writeln!(
        out,
        "coverage against UIR over {{{}}}; {} systems, {} cases; aggregate: {}",
        reference.join(", "),
        report.systems,
        report.cases,
        report.aggregate
    );
    out
}
