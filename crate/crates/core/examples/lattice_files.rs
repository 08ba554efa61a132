//! Lattice files, the built-in catalog, polygon CSV/SVG and the JSON
//! report encoding of exact values.

use std::error::Error;

use slopeforge::io::report::{epr_from_json, epr_json, filtration_json};
use slopeforge::io::{catalog, emit_lattice, parse_lattice, polygon_csv, polygon_svg, CATALOG_NAMES};
use slopeforge::rankin::{gs_filtration, SearchConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("catalog: {}", CATALOG_NAMES.join(" "));

    let l = parse_lattice(r#"{"name": "skew", "rank": 2, "gram": [["2", "1/2"], ["1/2", "3"]]}"#)?;
    let text = emit_lattice(&l);
    print!("{text}");
    assert_eq!(parse_lattice(&text)?, l);

    match parse_lattice(r#"{"rank": 2, "gram": [["1", "2"], ["2", "1"]]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("indefinite form accepted"),
    }

    let d14 = catalog("diag(1,4)")?;
    let f = gs_filtration(&d14, &SearchConfig::default())?;
    print!("{}", polygon_csv(&f.polygon()));
    let svg = polygon_svg(&d14.name(), &f.polygon());
    println!("svg: {} bytes", svg.len());

    let h = d14.dual().sq_height().reduced();
    let j = epr_json(&h);
    println!("H_r^2 of the dual as JSON: {j}");
    assert_eq!(epr_from_json(&j)?, h);
    println!("filtration JSON: {} bytes", serde_json::to_string(&filtration_json(&f))?.len());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
