//! Files, parallel drivers and the `ordeval` command line on top of
//! `ordeval-core`.

pub mod audit;
pub mod cli;
pub mod error;
pub mod metaeval;
pub mod render;
pub mod suite;
pub mod tsv;

pub use error::{Error, Result};
