//! JSON rendering of exact results and the report document.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::lattice_file::LatticeFile;
use crate::bost::MultiplicativityVerdict;
use crate::error::{Error, Result};
use crate::exact::{parse_rat, ExactPosReal, IntMatrix, RatMatrix};
use crate::lattice::{GramLattice, SqHeight, Sublattice};
use crate::rankin::{Filtration, MinFlag, RankinProfile};
use crate::symmetry::{AutGroup, IsodualityWitness};

/// `{"factors": {"2": "-1", "3": "1/2"}}`.
pub fn epr_json(x: &ExactPosReal) -> Value {
    let factors: Map<String, Value> = x.factors().iter().map(|(p, e)| (p.to_string(), Value::String(e.to_string()))).collect();
    json!({ "factors": factors })
}

pub fn epr_from_json(v: &Value) -> Result<ExactPosReal> {
    let obj = v
        .get("factors")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse("factors", "expected an object of prime -> exponent"))?;
    let mut pairs = Vec::with_capacity(obj.len());
    for (p, e) in obj {
        let prime = BigUint::from_str(p).map_err(|_| Error::parse(format!("factors.{p}"), "prime is not an integer"))?;
        let exp = e
            .as_str()
            .ok_or_else(|| Error::parse(format!("factors.{p}"), "exponent must be a string"))
            .and_then(|s| parse_rat(s).map_err(|m| Error::parse(format!("factors.{p}"), m)))?;
        pairs.push((prime, exp));
    }
    Ok(ExactPosReal::from_factors(pairs))
}

pub fn height_json(h: &SqHeight) -> Value {
    json!({
        "rank": h.rank,
        "sq_height": epr_json(&h.value),
        "reduced": epr_json(&h.reduced()),
        "display": h.reduced().to_string(),
    })
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// Row-major integer arrays (strings for entries beyond 64 bits).
pub fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.row_iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::parse("matrix", "expected an array of rows"))?;
    let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().filter(|r| r.len() == cols).ok_or_else(|| Error::parse(format!("row {}", i + 1), "ragged matrix"))?;
        let mut row = Vec::with_capacity(cols);
        for (j, x) in r.iter().enumerate() {
            let at = || format!("row {}, col {}", i + 1, j + 1);
            let val = match x {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::parse(at(), "not an integer"))?,
                Value::String(s) => BigInt::from_str(s).map_err(|_| Error::parse(at(), "not an integer"))?,
                _ => return Err(Error::parse(at(), "not an integer")),
            };
            row.push(val);
        }
        out.push(row);
    }
    Ok(IntMatrix::from_rows(&out, cols))
}

pub fn rat_matrix_json(m: &RatMatrix) -> Value {
    Value::Array(m.row_iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

pub fn lattice_json(l: &GramLattice) -> Value {
    serde_json::to_value(LatticeFile::from_lattice(l)).expect("serializable")
}

pub fn sublattice_json(s: &Sublattice) -> Value {
    json!({ "rank": s.rank(), "basis": matrix_json(s.basis()), "height": height_json(&s.sq_height()) })
}

pub fn flag_json(f: &MinFlag) -> Value {
    json!({
        "h_min": height_json(&f.h_min),
        "destabilizer": sublattice_json(&f.destabilizer),
        "minimizers": f.minimizers.iter().map(sublattice_json).collect::<Vec<_>>(),
        "certified": f.certified,
    })
}

pub fn filtration_json(f: &Filtration) -> Value {
    json!({
        "length": f.len(),
        "semistable": f.is_semistable(),
        "steps": f.steps.iter().map(sublattice_json).collect::<Vec<_>>(),
        "quotient_heights": f.quotient_heights.iter().map(height_json).collect::<Vec<_>>(),
        "polygon": f.polygon().iter().map(|(d, h)| json!({"dim": d, "sq_height": epr_json(h)})).collect::<Vec<_>>(),
        "certified": f.certified,
    })
}

pub fn profile_json(p: &RankinProfile) -> Value {
    Value::Array(
        p.entries
            .iter()
            .map(|e| {
                json!({
                    "rank": e.rank,
                    "d": e.min.as_ref().map(|d| d.to_string()),
                    "minimizers": e.minimizers.iter().map(|m| matrix_json(m.basis())).collect::<Vec<_>>(),
                    "radius": e.radius.to_string(),
                    "certified": e.certified,
                })
            })
            .collect(),
    )
}

pub fn isodual_json(w: &IsodualityWitness) -> Value {
    json!({
        "ratio": w.ratio.to_string(),
        "map_u": matrix_json(&w.map_u),
        "pairing_s": rat_matrix_json(&w.pairing_s),
        "types_realizable": w.types_realizable.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "signature": w.signature,
        "witt_index": w.witt_index,
        "orthogonal_signatures": w.orthogonal_signatures.iter().collect::<Vec<_>>(),
        "symplectic_map_u": w.symplectic.as_ref().map(|s| matrix_json(&s.u)),
        "witnesses_examined": w.examined.len(),
        "types_complete": w.types_complete,
    })
}

pub fn aut_json(g: &AutGroup) -> Value {
    json!({
        "order": g.order.to_string(),
        "orbit_sizes": g.orbit_sizes,
        "generators": g.generators.iter().map(matrix_json).collect::<Vec<_>>(),
        "closure_verified": g.closure_verified,
    })
}

pub fn verdict_json(v: &MultiplicativityVerdict) -> Value {
    json!({
        "equal": v.equal,
        "lhs": height_json(&v.lhs),
        "rhs": height_json(&v.rhs),
        "violating_witness": v.violating_witness.as_ref().map(sublattice_json),
        "witness_reverified": v.witness_reverified,
        "certified": v.certified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Inconclusive,
    Error,
    Failed,
}

impl Status {
    /// 0 verified, 1 usage or input error, 2 theorem-check failure,
    /// 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Failed => 2,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub elapsed_ms: u128,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub experiments: Vec<ExperimentRecord>,
}

impl ReportDocument {
    pub fn new(experiments: Vec<ExperimentRecord>) -> Self {
        ReportDocument { tool: "slopeforge".into(), version: env!("CARGO_PKG_VERSION").into(), experiments }
    }

    /// Worst status wins, failures first.
    pub fn status(&self) -> Status {
        self.experiments.iter().map(|e| e.status).max().unwrap_or(Status::Ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn by_kind(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for e in &self.experiments {
            *m.entry(e.kind.as_str()).or_default() += 1;
        }
        m
    }
}
