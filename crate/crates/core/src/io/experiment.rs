//! One experiment = one command: a lattice-level computation plus the
//! re-checks that decide its status.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};

use super::polygon::{polygon_csv, polygon_svg};
use super::report::{
    aut_json, filtration_json, height_json, isodual_json, lattice_json, profile_json, sublattice_json, verdict_json, Status,
};
use crate::bost::{check_c1_split, check_mix, check_multiplicativity, check_r2, check_redsi_chain, check_sgn, BostConfig};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::rankin::{gs_filtration, rankin_profile, validate_filtration, Filtration};
use crate::report::CheckReport;
use crate::symmetry::{
    automorphisms, cross_validate_th1, isoduality_witness, th1_certificate, unimodular_certificate, verify_aut_invariance,
    verify_isodual_filtration, verify_tau_square_law,
};

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub bost: BostConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TensorChecks {
    pub bost: bool,
    pub sgn: bool,
    pub mix: bool,
    pub redsi: bool,
    pub c1: bool,
    pub r2: bool,
}

impl TensorChecks {
    pub fn any(&self) -> bool {
        self.bost || self.sgn || self.mix || self.redsi || self.c1 || self.r2
    }

    /// Names as used on the command line and in manifests.
    pub fn parse(names: &[String]) -> Result<Self> {
        let mut c = TensorChecks::default();
        for n in names {
            match n.as_str() {
                "bost" => c.bost = true,
                "sgn" => c.sgn = true,
                "mix" => c.mix = true,
                "redsi" => c.redsi = true,
                "c1" => c.c1 = true,
                "r2" => c.r2 = true,
                other => return Err(Error::parse("checks", format!("unknown check `{other}`; expected bost, sgn, mix, redsi, c1 or r2"))),
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Debug)]
pub enum Experiment {
    Analyze(GramLattice),
    Filtration(GramLattice),
    Rankin { lattice: GramLattice, max_rank: Option<usize> },
    Isodual(GramLattice),
    Tensor { a: GramLattice, b: GramLattice, checks: TensorChecks },
    Polygon { lattice: GramLattice, svg: Option<PathBuf>, csv: Option<PathBuf> },
    Aut(GramLattice),
}

/// Result of a run. Files are returned rather than written so that a
/// single writer can serialize them.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
    pub json: Value,
    pub files: Vec<(PathBuf, String)>,
}

impl Outcome {
    fn new(status: Status, text: String, json: Value) -> Self {
        Outcome { status, text, json, files: Vec::new() }
    }

    pub fn from_error(e: &Error) -> Self {
        let status = if e.is_inconclusive() {
            Status::Inconclusive
        } else if matches!(e, Error::Invariant(_)) {
            Status::Failed
        } else {
            Status::Error
        };
        let word = match status {
            Status::Inconclusive => "inconclusive",
            Status::Failed => "FAILED",
            _ => "error",
        };
        Outcome::new(status, format!("{word}: {e}\n"), json!({ "error": e.to_string() }))
    }

    pub fn write_files(&self) -> Result<()> {
        for (path, body) in &self.files {
            std::fs::write(path, body).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        }
        Ok(())
    }
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Analyze(_) => "analyze",
            Experiment::Filtration(_) => "filtration",
            Experiment::Rankin { .. } => "rankin",
            Experiment::Isodual(_) => "isodual",
            Experiment::Tensor { .. } => "tensor",
            Experiment::Polygon { .. } => "polygon",
            Experiment::Aut(_) => "aut",
        }
    }

    pub fn run(&self, cfg: &RunConfig) -> Outcome {
        let r = match self {
            Experiment::Analyze(l) => analyze(l, cfg),
            Experiment::Filtration(l) => filtration(l, cfg),
            Experiment::Rankin { lattice, max_rank } => rankin(lattice, *max_rank, cfg),
            Experiment::Isodual(l) => isodual(l, cfg),
            Experiment::Tensor { a, b, checks } => tensor(a, b, *checks, cfg),
            Experiment::Polygon { lattice, svg, csv } => polygon(lattice, svg.as_ref(), csv.as_ref(), cfg),
            Experiment::Aut(l) => aut(l, cfg),
        };
        r.unwrap_or_else(|e| Outcome::from_error(&e))
    }
}

fn status_of(reports: &[&CheckReport]) -> Status {
    if reports.iter().any(|r| r.applicable && !r.passed()) {
        Status::Failed
    } else {
        Status::Ok
    }
}

fn report_json(r: &CheckReport) -> Value {
    serde_json::to_value(r).expect("serializable")
}

fn slope_filtration(l: &GramLattice, cfg: &RunConfig) -> Result<(Filtration, bool)> {
    if unimodular_certificate(l).is_some() {
        return Ok((Filtration::trivial(l), true));
    }
    Ok((gs_filtration(l, &cfg.bost.search)?, false))
}

/// Re-check a filtration: nested, semistable quotients, increasing heights.
fn recheck(f: &Filtration, by_certificate: bool, cfg: &RunConfig) -> Result<CheckReport> {
    let mut r = CheckReport::new(format!("filtration of {}", f.lattice().name()));
    if by_certificate {
        r.push("unimodular certificate", true, "definite similarity U = G");
        return Ok(r);
    }
    let c = validate_filtration(f, &cfg.bost.search)?;
    r.push("steps nested", c.nested, "");
    for (i, ok) in c.semistable_quotients.iter().enumerate() {
        r.push(format!("quotient {} semistable", i + 1), *ok, "");
    }
    r.push("quotient heights strictly increase", c.increasing, "");
    Ok(r)
}

fn describe_filtration(f: &Filtration) -> String {
    let mut s = String::new();
    if f.is_semistable() {
        writeln!(s, "semistable, H_r^2 = {}", f.lattice().sq_height().reduced()).unwrap();
        return s;
    }
    writeln!(s, "unstable, length {}", f.len()).unwrap();
    for (i, (step, q)) in f.steps.iter().zip(&f.quotient_heights).enumerate() {
        let rows: Vec<String> = step.basis().row_iter().map(|r| format!("{r:?}").replace(' ', "")).collect();
        writeln!(s, "  E_{}: rank {}, basis {}, quotient H_r^2 = {}", i + 1, step.rank(), rows.join(" "), q.reduced()).unwrap();
    }
    s
}

fn filtration(l: &GramLattice, cfg: &RunConfig) -> Result<Outcome> {
    let (f, cert) = slope_filtration(l, cfg)?;
    let check = recheck(&f, cert, cfg)?;
    let mut text = describe_filtration(&f);
    if !check.passed() {
        write!(text, "{check}").unwrap();
    }
    let json = json!({ "lattice": lattice_json(l), "filtration": filtration_json(&f), "by_certificate": cert, "checks": report_json(&check) });
    Ok(Outcome::new(status_of(&[&check]), text, json))
}

fn rankin(l: &GramLattice, max_rank: Option<usize>, cfg: &RunConfig) -> Result<Outcome> {
    let p = rankin_profile(l, max_rank, &cfg.bost.search)?;
    let mut text = String::new();
    for e in &p.entries {
        let d = e.min.as_ref().map_or("-".to_string(), ToString::to_string);
        let cert = if e.certified { "" } else { ", uncertified" };
        writeln!(text, "rank {}: d = {d} ({} minimizers{cert})", e.rank, e.minimizers.len()).unwrap();
    }
    Ok(Outcome::new(Status::Ok, text, json!({ "lattice": lattice_json(l), "profile": profile_json(&p) })))
}

fn isodual(l: &GramLattice, cfg: &RunConfig) -> Result<Outcome> {
    let Some(w) = isoduality_witness(l, &cfg.bost.isodual)? else {
        return Ok(Outcome::new(Status::Ok, "not isodual\n".into(), json!({ "lattice": lattice_json(l), "isodual": false })));
    };
    let mut text = String::new();
    writeln!(text, "isodual, c = {}", w.ratio).unwrap();
    writeln!(text, "  U = {}", rows(&w.map_u)).unwrap();
    let types: Vec<String> = w.types_realizable.iter().map(ToString::to_string).collect();
    let partial = if w.types_complete { "" } else { " (sweep partial)" };
    writeln!(text, "  types: {}{partial}", types.join(", ")).unwrap();
    if let (Some(s), Some(i)) = (w.signature, w.witt_index) {
        writeln!(text, "  signature {s}, Witt index {i}").unwrap();
    }
    let tau = verify_tau_square_law(&w);
    let (f, _) = slope_filtration(l, cfg)?;
    let fil = verify_isodual_filtration(&w, &f, cfg.bost.isodual.budget_nodes)?;
    let mut reports = vec![tau, fil];
    if let Ok(cert) = th1_certificate(&w) {
        writeln!(text, "  destabilizer bound (n - |s|)/2 = {}", cert.bound).unwrap();
        reports.push(cross_validate_th1(l, &cert, &cfg.bost.search)?);
    }
    let refs: Vec<&CheckReport> = reports.iter().collect();
    let status = status_of(&refs);
    for r in &reports {
        if r.applicable && !r.passed() {
            write!(text, "{r}").unwrap();
        }
    }
    let json = json!({
        "lattice": lattice_json(l),
        "isodual": true,
        "witness": isodual_json(&w),
        "checks": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(status, text, json))
}

fn rows(m: &crate::exact::IntMatrix) -> String {
    let r: Vec<String> = m.row_iter().map(|r| format!("{r:?}").replace(' ', "")).collect();
    format!("[{}]", r.join(","))
}

fn tensor(a: &GramLattice, b: &GramLattice, checks: TensorChecks, cfg: &RunConfig) -> Result<Outcome> {
    let checks = if checks.any() { checks } else { TensorChecks { bost: true, ..checks } };
    let bc = &cfg.bost;
    let mut text = String::new();
    let mut json = json!({ "a": lattice_json(a), "b": lattice_json(b) });
    let mut status = Status::Ok;
    if checks.bost {
        let v = check_multiplicativity(a, b, bc)?;
        if v.equal {
            writeln!(text, "equal, H_min = {}", v.lhs_reduced().sqrt()).unwrap();
        } else {
            status = Status::Failed;
            writeln!(
                text,
                "COUNTEREXAMPLE: H_min(A (x) B)^2 = {} < H_min(A)^2 H_min(B)^2 = {}",
                v.lhs_reduced(),
                v.rhs_reduced()
            )
            .unwrap();
            if let Some(w) = &v.violating_witness {
                writeln!(text, "  witness basis {} (re-verified: {})", rows(w.basis()), v.witness_reverified).unwrap();
            }
        }
        json["bost"] = verdict_json(&v);
    }
    let mut reports: Vec<(&str, CheckReport)> = Vec::new();
    if checks.sgn || checks.mix {
        let wa = isoduality_witness(a, &bc.isodual)?;
        let wb = isoduality_witness(b, &bc.isodual)?;
        match (&wa, &wb) {
            (Some(wa), Some(wb)) => {
                if checks.sgn {
                    reports.push(("sgn", check_sgn(a, wa, b, wb, bc)?));
                }
                if checks.mix {
                    reports.push(("mix", check_mix(a, wa, b, wb, bc)?));
                }
            }
            _ => {
                for (k, on) in [("sgn", checks.sgn), ("mix", checks.mix)] {
                    if on {
                        reports.push((k, CheckReport::not_applicable(format!("{k} {} (x) {}", a.name(), b.name()), "both factors must be isodual")));
                    }
                }
            }
        }
    }
    if checks.redsi {
        reports.push(("redsi", check_redsi_chain(a, b, bc)?));
    }
    if checks.c1 {
        let f = gs_filtration(b, &bc.search)?;
        reports.push(("c1", check_c1_split(a, &f.steps, bc)?));
    }
    if checks.r2 {
        let r = match check_r2(a, b, bc) {
            Err(Error::Dimension(m)) => CheckReport::not_applicable(format!("rank-2 split {} (x) {}", a.name(), b.name()), m),
            other => other?,
        };
        reports.push(("r2", r));
    }
    for (k, r) in &reports {
        let verdict = if !r.applicable {
            "hypothesis not satisfied".to_string()
        } else if r.passed() {
            "hypothesis satisfied, conclusion verified".to_string()
        } else {
            status = status.max(Status::Failed);
            format!("FAILED ({} checks)", r.failures().count())
        };
        writeln!(text, "{k}: {verdict}").unwrap();
        if r.applicable && !r.passed() {
            write!(text, "{r}").unwrap();
        }
        json[*k] = report_json(r);
    }
    Ok(Outcome::new(status, text, json))
}

fn polygon(l: &GramLattice, svg: Option<&PathBuf>, csv: Option<&PathBuf>, cfg: &RunConfig) -> Result<Outcome> {
    let (f, cert) = slope_filtration(l, cfg)?;
    let check = recheck(&f, cert, cfg)?;
    let poly = f.polygon();
    let body = polygon_csv(&poly);
    let mut out = Outcome::new(status_of(&[&check]), body.clone(), json!({ "lattice": lattice_json(l), "filtration": filtration_json(&f) }));
    if let Some(p) = csv {
        out.files.push((p.clone(), body));
    }
    if let Some(p) = svg {
        out.files.push((p.clone(), polygon_svg(&l.name(), &poly)));
    }
    Ok(out)
}

fn aut(l: &GramLattice, cfg: &RunConfig) -> Result<Outcome> {
    let g = automorphisms(l, cfg.bost.isodual.budget_nodes)?;
    let (f, _) = slope_filtration(l, cfg)?;
    let inv = verify_aut_invariance(&g, &f)?;
    let closure = if g.closure_verified { "closure verified" } else { "closure not enumerated" };
    let mut text = format!("|Aut| = {} ({} generators, {closure})\n", g.order, g.generators.len());
    let word = if inv.passed() { "invariant" } else { "NOT invariant" };
    writeln!(text, "filtration steps {word} under Aut").unwrap();
    let json = json!({ "lattice": lattice_json(l), "aut": aut_json(&g), "invariance": report_json(&inv) });
    Ok(Outcome::new(status_of(&[&inv]), text, json))
}

fn analyze(l: &GramLattice, cfg: &RunConfig) -> Result<Outcome> {
    let mut text = String::new();
    let h = l.sq_height();
    writeln!(text, "{} (rank {})", l.name(), l.rank()).unwrap();
    writeln!(text, "  det = {}, H_r^2 = {}, unimodular: {}", l.det(), h.reduced(), if l.is_unimodular() { "yes" } else { "no" }).unwrap();
    let (f, cert) = slope_filtration(l, cfg)?;
    let check = recheck(&f, cert, cfg)?;
    for line in describe_filtration(&f).lines() {
        writeln!(text, "  {line}").unwrap();
    }
    let w = isoduality_witness(l, &cfg.bost.isodual)?;
    match &w {
        Some(w) => {
            let types: Vec<String> = w.types_realizable.iter().map(ToString::to_string).collect();
            writeln!(text, "  isodual, c = {}, types {}", w.ratio, types.join(", ")).unwrap();
        }
        None => writeln!(text, "  not isodual").unwrap(),
    }
    let g = automorphisms(l, cfg.bost.isodual.budget_nodes)?;
    writeln!(text, "  |Aut| = {}", g.order).unwrap();
    let json = json!({
        "lattice": lattice_json(l),
        "sq_height": height_json(&h),
        "filtration": filtration_json(&f),
        "destabilizer": f.steps.first().map(sublattice_json),
        "isodual": w.as_ref().map(isodual_json),
        "aut": aut_json(&g),
        "checks": report_json(&check),
    });
    Ok(Outcome::new(status_of(&[&check]), text, json))
}
