//! Command-line surface over [`crate::io::Experiment`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::batch::{apply_overrides, run_manifest, Manifest};
use crate::io::{load_lattice, Experiment, Outcome, ReportDocument, RunConfig, Status, TensorChecks};
use crate::io::report::ExperimentRecord;

#[derive(Debug, Parser)]
#[command(name = "slopeforge", version, about = "Exact slope filtrations, isoduality and tensor heights of lattices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Search-tree node budget per enumeration.
    #[arg(long, global = true, value_name = "N")]
    pub budget_nodes: Option<u64>,
    /// Largest rank enumerated in certified mode.
    #[arg(long, global = true, value_name = "N")]
    pub rank_cap: Option<usize>,
    /// Replace certified search radii by this squared radius (results are
    /// flagged uncertified).
    #[arg(long, global = true, value_name = "P/Q")]
    pub uncertified_radius: Option<String>,
    /// Write a JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

/// Lattice as `catalog:NAME` or a lattice file path.
#[derive(Debug, Args)]
pub struct Input {
    #[arg(long = "in", value_name = "LATTICE")]
    pub input: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heights, slope filtration, isoduality and automorphisms at a glance.
    Analyze(Input),
    /// Slope filtration with re-checks.
    Filtration(Input),
    /// Rankin minima d_k for k = 1..max-rank.
    Rankin {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_rank: Option<usize>,
    },
    /// Isoduality witness, pairing types and filtration checks.
    Isodual(Input),
    /// Tensor-product checks on a pair of lattices.
    Tensor {
        #[arg(long, value_name = "LATTICE")]
        a: String,
        #[arg(long, value_name = "LATTICE")]
        b: String,
        #[arg(long)]
        check_bost: bool,
        #[arg(long)]
        check_sgn: bool,
        #[arg(long)]
        check_mix: bool,
        #[arg(long)]
        check_redsi: bool,
        #[arg(long)]
        check_c1: bool,
        #[arg(long)]
        check_r2: bool,
    },
    /// Canonical polygon as CSV (stdout or --csv) and SVG.
    Polygon {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Automorphism group and invariance of the filtration.
    Aut(Input),
    /// Run a manifest of experiments concurrently.
    Batch {
        #[arg(long, value_name = "PATH")]
        manifest: PathBuf,
    },
}

fn experiment(cmd: Command) -> Result<Experiment> {
    Ok(match cmd {
        Command::Analyze(i) => Experiment::Analyze(load_lattice(&i.input)?),
        Command::Filtration(i) => Experiment::Filtration(load_lattice(&i.input)?),
        Command::Rankin { input, max_rank } => Experiment::Rankin { lattice: load_lattice(&input.input)?, max_rank },
        Command::Isodual(i) => Experiment::Isodual(load_lattice(&i.input)?),
        Command::Aut(i) => Experiment::Aut(load_lattice(&i.input)?),
        Command::Polygon { input, svg, csv } => Experiment::Polygon { lattice: load_lattice(&input.input)?, svg, csv },
        Command::Tensor { a, b, check_bost, check_sgn, check_mix, check_redsi, check_c1, check_r2 } => Experiment::Tensor {
            a: load_lattice(&a)?,
            b: load_lattice(&b)?,
            checks: TensorChecks { bost: check_bost, sgn: check_sgn, mix: check_mix, redsi: check_redsi, c1: check_c1, r2: check_r2 },
        },
        Command::Batch { .. } => unreachable!("handled by the caller"),
    })
}

fn write_report(path: &PathBuf, doc: &ReportDocument) -> Result<()> {
    std::fs::write(path, doc.to_json()).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    let g = &cli.global;
    let cfg = apply_overrides(&RunConfig::default(), g.budget_nodes, g.rank_cap, g.uncertified_radius.as_deref())?;
    if let Command::Batch { manifest } = &cli.command {
        let m = Manifest::read(manifest)?;
        let base = manifest.parent().map(PathBuf::from).unwrap_or_default();
        let doc = run_manifest(&m, &base, &cfg)?;
        for e in &doc.experiments {
            let tag = match e.status {
                Status::Ok => "ok  ",
                Status::Inconclusive => "inc ",
                Status::Error => "err ",
                Status::Failed => "FAIL",
            };
            writeln!(out, "[{tag}] {} ({}, {} ms)", e.id, e.kind, e.elapsed_ms)?;
            if let Some(msg) = &e.error {
                writeln!(out, "       {msg}")?;
            }
        }
        if let Some(p) = &g.report {
            write_report(p, &doc)?;
        }
        return Ok(doc.status());
    }
    let report = g.report.clone();
    let exp = experiment(cli.command)?;
    let start = std::time::Instant::now();
    let outcome: Outcome = exp.run(&cfg);
    outcome.write_files()?;
    out.write_all(outcome.text.as_bytes())?;
    if let Some(p) = report {
        let rec = ExperimentRecord {
            id: exp.kind().into(),
            kind: exp.kind().into(),
            status: outcome.status,
            elapsed_ms: start.elapsed().as_millis(),
            result: outcome.json,
            error: None,
        };
        write_report(&p, &ReportDocument::new(vec![rec]))?;
    }
    Ok(outcome.status)
}

fn threads_from_env() {
    if let Some(n) = std::env::var("SLOPEFORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second call fails when the pool already exists; the first size stays
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    threads_from_env();
    match execute(cli, out) {
        Ok(s) => s.exit_code(),
        Err(e) => {
            let o = Outcome::from_error(&e);
            let _ = err.write_all(o.text.as_bytes());
            o.status.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("slopeforge").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["filtration", "--in", "catalog:A2"]).0, 0);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["filtration"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        let (code, _, err) = call(&["aut", "--in", "catalog:Q7"]);
        assert_eq!(code, 1);
        assert!(err.contains("available"), "{err}");
        assert_eq!(call(&["--rank-cap", "3", "tensor", "--a", "catalog:A2", "--b", "catalog:A2"]).0, 3);
        assert_eq!(call(&["--uncertified-radius", "x", "aut", "--in", "catalog:A2"]).0, 1);
    }
}
