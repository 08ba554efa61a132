//! Lattice files: `{"name": "A2", "rank": 2, "gram": [["2", "1"], ["1", "2"]]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::catalog;
use crate::error::{Error, Result};
use crate::exact::{parse_rat, Rat, RatMatrix};
use crate::lattice::GramLattice;

/// A Gram entry: a `"p"` / `"p/q"` string, or a bare JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Int(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub gram: Vec<Vec<Entry>>,
}

impl LatticeFile {
    pub fn from_lattice(l: &GramLattice) -> Self {
        let n = l.rank();
        let g = l.gram();
        LatticeFile {
            name: l.label().map(str::to_owned),
            rank: n,
            gram: (0..n).map(|i| (0..n).map(|j| Entry::Text(g[(i, j)].to_string())).collect()).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<GramLattice> {
        let n = self.rank;
        if n == 0 {
            return Err(Error::parse("rank", "rank must be positive"));
        }
        if self.gram.len() != n {
            return Err(Error::parse("gram", format!("rank is {n} but gram has {} rows", self.gram.len())));
        }
        let mut data: Vec<Rat> = Vec::with_capacity(n * n);
        for (i, row) in self.gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::parse(format!("row {}", i + 1), format!("expected {n} entries, found {}", row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                let q = match e {
                    Entry::Text(s) => parse_rat(s),
                    Entry::Int(v) => Ok(Rat::from_integer((*v).into())),
                };
                data.push(q.map_err(|m| Error::parse(format!("row {}, col {}", i + 1, j + 1), m))?);
            }
        }
        let m = RatMatrix::from_vec(n, n, data);
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::parse(
                        format!("row {}, col {}", i + 1, j + 1),
                        format!("asymmetric: {} here but {} at row {}, col {}", m[(i, j)], m[(j, i)], j + 1, i + 1),
                    ));
                }
            }
        }
        let l = GramLattice::new(m).map_err(|e| match e {
            Error::Definiteness { order, value } => Error::parse(
                format!("row {order}, col {order}"),
                format!("not positive definite: leading principal minor of order {order} is {value}"),
            ),
            other => other,
        })?;
        Ok(match &self.name {
            Some(name) => l.with_label(name.clone()),
            None => l,
        })
    }
}

pub fn parse_lattice(text: &str) -> Result<GramLattice> {
    let file: LatticeFile = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    file.to_lattice()
}

/// Pretty JSON with one Gram row per line; `parse_lattice` inverts it.
pub fn emit_lattice(l: &GramLattice) -> String {
    let f = LatticeFile::from_lattice(l);
    let q = |s: &str| serde_json::to_string(s).expect("string");
    let mut out = String::from("{\n");
    if let Some(name) = &f.name {
        out.push_str(&format!("  \"name\": {},\n", q(name)));
    }
    out.push_str(&format!("  \"rank\": {},\n  \"gram\": [\n", f.rank));
    for (i, row) in f.gram.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|e| match e {
                Entry::Text(s) => q(s),
                Entry::Int(v) => q(&v.to_string()),
            })
            .collect();
        let sep = if i + 1 < f.gram.len() { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", cells.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}

/// `catalog:NAME` or a path to a lattice file.
pub fn load_lattice(arg: &str) -> Result<GramLattice> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        return catalog::catalog(name);
    }
    read_lattice_file(Path::new(arg))
}

pub fn read_lattice_file(path: &Path) -> Result<GramLattice> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_lattice(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        other => other,
    })
}
