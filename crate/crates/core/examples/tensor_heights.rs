//! Minimal heights of tensor products, balancing scales and the product
//! law for direct sums.

use std::error::Error;

use slopeforge::bost::{balance, check_multiplicativity, check_product_law, BostConfig};
use slopeforge::io::catalog;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = BostConfig::default();
    let pairs = [("diag(1,4)", "diag(1,4)"), ("A2", "diag(1,4)"), ("A2", "A2"), ("Z2", "A3")];
    for (a, b) in pairs {
        let v = check_multiplicativity(&catalog(a)?, &catalog(b)?, &cfg)?;
        let verdict = if v.equal { "equal" } else { "STRICT" };
        println!("H_min^2({a} (x) {b}) = {} vs {}: {verdict}", v.lhs_reduced(), v.rhs_reduced());
        assert!(v.equal);
    }

    for name in ["diag(1,4)", "A2"] {
        let b = balance(&catalog(name)?, &cfg)?;
        let how = if b.symbolic { "symbolic" } else { "rational" };
        println!("balance {name}: s = {} ({how}), H_min^2 = {}", b.scale_sq, b.balanced_sq());
    }

    let r = check_product_law(&catalog("A2")?, &catalog("diag(1,4)")?, &cfg)?;
    assert!(r.passed());
    print!("{r}");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
