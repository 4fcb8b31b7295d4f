//! Benchmark suites on disk: `case_<k>/gold.tsv`, `case_<k>/sys_<name>.tsv`
//! and a `manifest.json` recording how the suite was made.

use std::fs;
use std::path::{Path, PathBuf};

use ordeval_core::synth::{self, SynthConfig};
use ordeval_core::{LabeledDataset, OrdinalScale};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsv;

pub const MANIFEST: &str = "manifest.json";
pub const GOLD_FILE: &str = "gold.tsv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub config: SynthConfig,
    pub classes: Vec<String>,
    pub cases: Vec<String>,
    pub systems: Vec<String>,
}

pub fn case_dir_name(case: usize) -> String {
    format!("case_{case}")
}

pub fn system_file_name(system: &str) -> String {
    format!("sys_{system}.tsv")
}

pub fn item_id(index: usize) -> String {
    format!("d{index}")
}

fn write_labels(path: &Path, labels: &[usize], scale: &OrdinalScale) -> Result<()> {
    let ids: Vec<String> = (0..labels.len()).map(item_id).collect();
    tsv::write_labels(
        path,
        ids.iter()
            .zip(labels)
            .map(|(id, &l)| (id.as_str(), scale.label(l).expect("generated label in range"))),
    )
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Generates the suite described by `config` into `dir`. Cases are written
/// in parallel; the output does not depend on the number of threads.
pub fn write_suite(config: &SynthConfig, dir: &Path) -> Result<Manifest> {
    config.validate()?;
    let scale = OrdinalScale::numbered(config.num_classes)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    (0..config.test_cases).into_par_iter().try_for_each(|case| -> Result<()> {
        let generated = synth::generate_case(config, case)?;
        let case_dir = dir.join(case_dir_name(case));
        fs::create_dir_all(&case_dir).map_err(|e| Error::io(&case_dir, e))?;
        write_labels(&case_dir.join(GOLD_FILE), &generated.gold, &scale)?;
        for (spec, labels) in &generated.systems {
            write_labels(&case_dir.join(system_file_name(&spec.name())), labels, &scale)?;
        }
        log::debug!("wrote {}", case_dir.display());
        Ok(())
    })?;
    let manifest = Manifest {
        generator: "ordeval synth".into(),
        config: config.clone(),
        classes: scale.classes().to_vec(),
        cases: (0..config.test_cases).map(case_dir_name).collect(),
        systems: config.systems().iter().map(|s| s.name()).collect(),
    };
    write_json(&dir.join(MANIFEST), &manifest)?;
    Ok(manifest)
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub name: String,
    pub dataset: LabeledDataset,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub dir: PathBuf,
    pub manifest: Option<Manifest>,
    pub scale: OrdinalScale,
    pub systems: Vec<String>,
    pub cases: Vec<SuiteCase>,
}

pub fn read_manifest(dir: &Path) -> Result<Option<Manifest>> {
    let path = dir.join(MANIFEST);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|source| Error::Json { path, source })
}

fn list_dir(dir: &Path) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        names.push(entry.file_name().to_string_lossy().into_owned());
    }
    Ok(names)
}

/// `case_<k>` directories ordered by `k`.
fn discover_cases(dir: &Path) -> Result<Vec<String>> {
    let mut cases: Vec<(usize, String)> = list_dir(dir)?
        .into_iter()
        .filter(|n| dir.join(n).is_dir())
        .filter_map(|n| Some((n.strip_prefix("case_")?.parse().ok()?, n)))
        .collect();
    cases.sort();
    Ok(cases.into_iter().map(|(_, n)| n).collect())
}

fn discover_systems(case_dir: &Path) -> Result<Vec<String>> {
    let mut systems: Vec<String> = list_dir(case_dir)?
        .into_iter()
        .filter_map(|n| Some(n.strip_prefix("sys_")?.strip_suffix(".tsv")?.to_string()))
        .collect();
    systems.sort();
    Ok(systems)
}

/// Loads a suite. Cases, systems and classes come from the manifest when
/// there is one; otherwise cases and systems are discovered on disk and the
/// classes must be supplied.
pub fn load_suite(dir: &Path, classes: Option<Vec<String>>) -> Result<Suite> {
    let manifest = read_manifest(dir)?;
    let (labels, cases, systems) = match &manifest {
        Some(m) => (
            classes.unwrap_or_else(|| m.classes.clone()),
            m.cases.clone(),
            m.systems.clone(),
        ),
        None => {
            let labels = classes.ok_or_else(|| {
                Error::Usage(format!(
                    "{} has no {MANIFEST}; pass the classes explicitly",
                    dir.display()
                ))
            })?;
            let cases = discover_cases(dir)?;
            let first = cases
                .first()
                .ok_or_else(|| Error::Usage(format!("no case_<k> directories in {}", dir.display())))?;
            let systems = discover_systems(&dir.join(first))?;
            (labels, cases, systems)
        }
    };
    if systems.is_empty() {
        return Err(Error::Usage(format!("no system outputs in {}", dir.display())));
    }
    let scale = OrdinalScale::new(labels)?;
    let loaded = cases
        .par_iter()
        .map(|name| -> Result<SuiteCase> {
            let case_dir = dir.join(name);
            let gold = tsv::read_labels(&case_dir.join(GOLD_FILE))?;
            let mut dataset = LabeledDataset::new(scale.clone(), gold)?;
            for system in &systems {
                let path = case_dir.join(system_file_name(system));
                if !path.exists() {
                    return Err(Error::Usage(format!(
                        "{name}: system `{system}` has no output file {}",
                        path.display()
                    )));
                }
                dataset = dataset.with_system(system.clone(), tsv::read_labels(&path)?)?;
            }
            Ok(SuiteCase {
                name: name.clone(),
                dataset,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Suite {
        dir: dir.to_path_buf(),
        manifest,
        scale,
        systems,
        cases: loaded,
    })
}
