//! Evaluation of ordinal classification outputs.
//!
//! The crate computes the Closeness Evaluation Measure (CEM) at ordinal,
//! nominal and interval scale together with the usual classification,
//! error-minimisation, correlation and clustering baselines. It also audits
//! metrics against the ordinal-invariance, ordinal-monotonicity and
//! imbalance properties, generates synthetic benchmark suites, and
//! meta-evaluates metrics through unanimous improvement ratio, coverage and
//! robustness.
//!
//! Everything here is `no_std` + `alloc` and free of IO; file formats, the
//! command line and parallel drivers live in the `ordeval` crate.
#![no_std]
extern crate alloc;

pub mod baselines;
pub mod cem;
pub mod dataset;
pub mod error;
pub mod meta;
pub mod metrics;
pub mod properties;
pub mod report;
pub mod rng;
pub mod scale;
pub mod stats;
pub mod synth;

pub use cem::{cem, cem_flat, ciq, EmptyClassPolicy, ProximityTable, ScaleType};
pub use dataset::{ConfusionMatrix, GoldDistribution, LabeledDataset};
pub use error::{Error, ErrorKind, Result};
pub use metrics::{list_metrics, score, score_labels, MetricId, MetricParams};
pub use scale::OrdinalScale;
pub use meta::{coverage, robustness, uir, MetaConfig, MetaReport, ScoreCube};
pub use properties::{audit_all, AuditVerdict, Counterexample, PropertyId, Verdict};
pub use report::MetricReport;
pub use synth::{ErrorModel, SynthConfig};
