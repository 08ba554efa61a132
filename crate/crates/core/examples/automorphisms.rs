//! Isometries between Gram matrices and automorphism group orders.

use std::error::Error;

use slopeforge::exact::IntMatrix;
use slopeforge::io::catalog;
use slopeforge::symmetry::{automorphisms, isometries, IsometryOptions, DEFAULT_ISOMETRY_BUDGET};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for name in ["Z2", "Z3", "A2", "A3", "D4", "E8"] {
        let g = automorphisms(&catalog(name)?, DEFAULT_ISOMETRY_BUDGET)?;
        println!("|Aut({name})| = {} (orbits {:?})", g.order, g.orbit_sizes);
    }

    // A2 in a skewed basis is still A2
    let a2 = catalog("A2")?;
    let change = IntMatrix::from_i64(2, 2, &[1, 3, 0, 1]);
    let skewed = slopeforge::lattice::GramLattice::new(change.to_rat().congruence(a2.gram()))?;
    let maps = isometries(&skewed, &a2, &IsometryOptions { first_only: true, ..Default::default() })?;
    let u = &maps.maps[0];
    println!("isometry U = {:?}", u.to_rows());
    assert_eq!(&u.transpose().to_rat().congruence(a2.gram()), skewed.gram());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
