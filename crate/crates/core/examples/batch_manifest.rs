//! A small batch: experiments run concurrently, the report comes back in
//! manifest order.

use std::error::Error;

use slopeforge::io::batch::{run_manifest, Manifest};
use slopeforge::io::RunConfig;

const MANIFEST: &str = r#"{
  "budget_nodes": 20000000,
  "experiments": [
    {"id": "a2-filtration", "kind": "filtration", "in": "catalog:A2"},
    {"id": "e8-aut", "kind": "aut", "in": "catalog:E8"},
    {"id": "d14-isodual", "kind": "isodual", "in": {"rank": 2, "gram": [["1", "0"], ["0", "4"]]}},
    {"id": "d14-tensor", "kind": "tensor", "a": "catalog:diag(1,4)", "b": "catalog:diag(1,4)",
     "checks": ["bost", "sgn", "mix", "redsi"]},
    {"id": "a3-rankin", "kind": "rankin", "in": "catalog:A3", "max_rank": 2}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = Manifest::parse(MANIFEST)?;
    let doc = run_manifest(&m, std::path::Path::new("."), &RunConfig::default())?;
    for e in &doc.experiments {
        println!("{:<14} {:<10} {:?}", e.id, e.kind, e.status);
    }
    println!("overall exit code {}", doc.status().exit_code());
    assert_eq!(doc.status().exit_code(), 0);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
