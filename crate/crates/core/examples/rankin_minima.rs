//! Rankin minima and short vectors of root lattices.

use std::error::Error;

use slopeforge::exact::int;
use slopeforge::io::catalog;
use slopeforge::rankin::{h_min, rankin_profile, short_vectors, SearchConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = SearchConfig::default();
    for name in ["A2", "A3", "D4"] {
        let l = catalog(name)?;
        let roots = short_vectors(&l, &int(2))?;
        let p = rankin_profile(&l, None, &cfg)?;
        let ds: Vec<String> = p.entries.iter().map(|e| e.min.as_ref().map_or("-".into(), |d| d.to_string())).collect();
        println!("{name}: {} root pairs, d_k = [{}]", roots.len(), ds.join(", "));
        let flag = h_min(&l, &cfg)?;
        println!("    H_min^2 = {} from rank {}", flag.reduced(), flag.destabilizer.rank());
    }
    // D4 has 24 roots; its two-dimensional minimum is the A2 determinant
    let d4 = rankin_profile(&catalog("D4")?, Some(2), &cfg)?;
    assert_eq!(d4.d(2), Some(&int(3)));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
