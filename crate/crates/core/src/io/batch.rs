//! Manifest-driven batch runs.
//!
//! ```json
//! {
//!   "budget_nodes": 10000000,
//!   "rank_cap": 9,
//!   "experiments": [
//!     {"id": "a2", "kind": "filtration", "in": "catalog:A2"},
//!     {"kind": "tensor", "a": "d14.json", "b": {"rank": 1, "gram": [["2"]]}, "checks": ["bost", "sgn"]},
//!     {"kind": "polygon", "in": "catalog:diag(1,4)", "svg": "d14.svg", "csv": "d14.csv"}
//!   ]
//! }
//! ```
//!
//! Lattices are `catalog:NAME`, a path relative to the manifest, or an
//! inline lattice object.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use super::experiment::{Experiment, Outcome, RunConfig, TensorChecks};
use super::lattice_file::{load_lattice, LatticeFile};
use super::report::{ExperimentRecord, ReportDocument, Status};
use crate::error::{Error, Result};
use crate::exact::parse_rat;
use crate::lattice::GramLattice;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub rank_cap: Option<usize>,
    #[serde(default)]
    pub uncertified_radius: Option<String>,
    pub experiments: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    #[serde(default)]
    pub id: Option<String>,
    pub kind: String,
    #[serde(default, rename = "in")]
    pub input: Option<Value>,
    #[serde(default)]
    pub a: Option<Value>,
    #[serde(default)]
    pub b: Option<Value>,
    #[serde(default)]
    pub max_rank: Option<usize>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub rank_cap: Option<usize>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("manifest line {}, column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        Self::parse(&text)
    }
}

/// Global settings with the manifest's and then the entry's overrides.
pub fn apply_overrides(base: &RunConfig, budget: Option<u64>, rank_cap: Option<usize>, radius: Option<&str>) -> Result<RunConfig> {
    let mut cfg = base.clone();
    if let Some(b) = budget {
        cfg.bost.search.budget_nodes = b;
        cfg.bost.isodual.budget_nodes = b;
    }
    if let Some(c) = rank_cap {
        cfg.bost.rank_cap = c;
    }
    if let Some(r) = radius {
        cfg.bost.search.radius_override = Some(parse_rat(r).map_err(|m| Error::parse("uncertified_radius", m))?);
    }
    Ok(cfg)
}

fn lattice_arg(v: Option<&Value>, field: &str, base: &Path) -> Result<GramLattice> {
    match v {
        None => Err(Error::parse(field, "missing lattice")),
        Some(Value::String(s)) if s.starts_with("catalog:") => load_lattice(s),
        Some(Value::String(s)) => load_lattice(&base.join(s).to_string_lossy()),
        Some(obj @ Value::Object(_)) => {
            let f: LatticeFile = serde_json::from_value(obj.clone()).map_err(|e| Error::parse(field, e.to_string()))?;
            f.to_lattice()
        }
        Some(_) => Err(Error::parse(field, "expected catalog:NAME, a path or a lattice object")),
    }
}

fn build(e: &ManifestEntry, base: &Path) -> Result<Experiment> {
    let input = || lattice_arg(e.input.as_ref(), "in", base);
    Ok(match e.kind.as_str() {
        "analyze" => Experiment::Analyze(input()?),
        "filtration" => Experiment::Filtration(input()?),
        "rankin" => Experiment::Rankin { lattice: input()?, max_rank: e.max_rank },
        "isodual" => Experiment::Isodual(input()?),
        "aut" => Experiment::Aut(input()?),
        "polygon" => Experiment::Polygon {
            lattice: input()?,
            svg: e.svg.as_ref().map(|p| base.join(p)),
            csv: e.csv.as_ref().map(|p| base.join(p)),
        },
        "tensor" => Experiment::Tensor {
            a: lattice_arg(e.a.as_ref(), "a", base)?,
            b: lattice_arg(e.b.as_ref(), "b", base)?,
            checks: TensorChecks::parse(&e.checks)?,
        },
        other => return Err(Error::parse("kind", format!("unknown experiment kind `{other}`"))),
    })
}

/// Run every entry concurrently; records keep manifest order and output
/// files are written afterwards, one at a time.
pub fn run_manifest(m: &Manifest, base: &Path, global: &RunConfig) -> Result<ReportDocument> {
    let cfg = apply_overrides(global, m.budget_nodes, m.rank_cap, m.uncertified_radius.as_deref())?;
    let results: Vec<(ExperimentRecord, Outcome)> = m
        .experiments
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let id = entry.id.clone().unwrap_or_else(|| format!("{}-{}", entry.kind, i + 1));
            let start = Instant::now();
            let outcome = apply_overrides(&cfg, entry.budget_nodes, entry.rank_cap, None)
                .and_then(|c| build(entry, base).map(|x| x.run(&c)))
                .unwrap_or_else(|e| Outcome::from_error(&e));
            let error = matches!(outcome.status, Status::Error | Status::Inconclusive).then(|| outcome.text.trim().to_owned());
            let rec = ExperimentRecord {
                id,
                kind: entry.kind.clone(),
                status: outcome.status,
                elapsed_ms: start.elapsed().as_millis(),
                result: outcome.json.clone(),
                error,
            };
            (rec, outcome)
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for (mut rec, outcome) in results {
        if let Err(e) = outcome.write_files() {
            rec.status = rec.status.max(Status::Error);
            rec.error = Some(e.to_string());
        }
        records.push(rec);
    }
    Ok(ReportDocument::new(records))
}
