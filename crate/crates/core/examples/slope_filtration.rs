//! Slope filtration and canonical polygon of a handful of lattices, each
//! re-validated after the fact.

use std::error::Error;

use slopeforge::exact::rat;
use slopeforge::lattice::GramLattice;
use slopeforge::rankin::{gs_filtration, validate_filtration, SearchConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = SearchConfig::default();
    let lattices = [
        GramLattice::diag(&[rat(1, 1), rat(4, 1)])?.with_label("diag(1,4)"),
        GramLattice::from_int_rows(&[vec![2, 1], vec![1, 2]])?.with_label("A2"),
        GramLattice::diag(&[rat(1, 1), rat(4, 1), rat(1, 1), rat(1, 4)])?.with_label("diag(1,4,1,1/4)"),
        GramLattice::from_int_rows(&[vec![3, 1, 0], vec![1, 5, 2], vec![0, 2, 7]])?,
    ];
    for l in &lattices {
        let f = gs_filtration(l, &cfg)?;
        let check = validate_filtration(&f, &cfg)?;
        assert!(check.passed());
        println!("{}: length {}, semistable {}", l.name(), f.len(), f.is_semistable());
        for (dim, h) in f.polygon() {
            println!("    ({dim}, {h})");
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
