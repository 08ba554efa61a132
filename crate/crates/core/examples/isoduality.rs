//! Isoduality witnesses, pairing types, and how the pairing constrains
//! the slope filtration.

use std::error::Error;

use slopeforge::io::catalog;
use slopeforge::rankin::{gs_filtration, SearchConfig};
use slopeforge::symmetry::{
    isoduality_witness, th1_certificate, verify_isodual_filtration, verify_tau_square_law, IsodualOptions,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let opts = IsodualOptions::default();
    for name in ["diag(1,4)", "diag(1,9)", "diag(1,4)xdual", "A2", "D4", "diag(1,1,4)"] {
        let l = catalog(name)?;
        let Some(w) = isoduality_witness(&l, &opts)? else {
            println!("{name}: not isodual");
            continue;
        };
        let types: Vec<String> = w.types_realizable.iter().map(|t| t.to_string()).collect();
        println!("{name}: c = {}, U = {:?}, types {}", w.ratio, w.map_u.to_rows(), types.join("+"));
        assert!(verify_tau_square_law(&w).passed());

        let f = gs_filtration(&l, &SearchConfig::default())?;
        let r = verify_isodual_filtration(&w, &f, opts.budget_nodes)?;
        assert!(r.passed(), "{r}");
        if let Ok(cert) = th1_certificate(&w) {
            println!("    max |s| = {}, destabilizer rank <= {}", cert.signature.abs(), cert.bound);
        }
        if !f.is_semistable() {
            print!("{r}");
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
