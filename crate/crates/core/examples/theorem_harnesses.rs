//! Executable versions of the tensor-product criteria: signature bounds,
//! definite/Lorentzian cases, rank-two and split reductions, and the
//! balanced reduction chains.

use std::error::Error;

use slopeforge::bost::{check_c1_split, check_mix, check_r2, check_redsi_chain, check_sgn, BostConfig};
use slopeforge::io::catalog;
use slopeforge::rankin::gs_filtration;
use slopeforge::report::CheckReport;
use slopeforge::symmetry::isoduality_witness;

fn show(r: &CheckReport) {
    let v = match (r.applicable, r.passed()) {
        (false, _) => "not applicable",
        (true, true) => "verified",
        (true, false) => "FAILED",
    };
    println!("{}: {v} ({} checks)", r.subject, r.checks.len());
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = BostConfig::default();
    let (z2, d14, d19) = (catalog("Z2")?, catalog("diag(1,4)")?, catalog("diag(1,9)")?);
    let w = |l| isoduality_witness(l, &cfg.isodual).map(|w| w.expect("isodual"));

    let mut reports = vec![
        check_sgn(&z2, &w(&z2)?, &d14, &w(&d14)?, &cfg)?,
        check_mix(&d14, &w(&d14)?, &d19, &w(&d19)?, &cfg)?,
        check_r2(&catalog("A2")?, &d14, &cfg)?,
        check_c1_split(&z2, &gs_filtration(&d14, &cfg.search)?.steps, &cfg)?,
    ];
    reports.push(check_redsi_chain(&d14, &z2, &cfg)?);
    reports.push(check_redsi_chain(&d14, &d14, &cfg)?);
    for r in &reports {
        show(r);
        assert!(r.passed(), "{r}");
    }
    print!("{}", reports.last().expect("nonempty"));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
