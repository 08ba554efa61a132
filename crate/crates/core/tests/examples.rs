//! Every example runs to completion.

#[allow(dead_code)]
#[path = "../examples/automorphisms.rs"]
mod automorphisms;

#[allow(dead_code)]
#[path = "../examples/batch_manifest.rs"]
mod batch_manifest;

#[allow(dead_code)]
#[path = "../examples/exact_arithmetic.rs"]
mod exact_arithmetic;

#[allow(dead_code)]
#[path = "../examples/isoduality.rs"]
mod isoduality;

#[allow(dead_code)]
#[path = "../examples/lattice_files.rs"]
mod lattice_files;

#[allow(dead_code)]
#[path = "../examples/rankin_minima.rs"]
mod rankin_minima;

#[allow(dead_code)]
#[path = "../examples/slope_filtration.rs"]
mod slope_filtration;

#[allow(dead_code)]
#[path = "../examples/tensor_heights.rs"]
mod tensor_heights;

#[allow(dead_code)]
#[path = "../examples/theorem_harnesses.rs"]
mod theorem_harnesses;

#[test]
fn example_automorphisms() {
    automorphisms::run_example().unwrap();
}

#[test]
fn example_batch_manifest() {
    batch_manifest::run_example().unwrap();
}

#[test]
fn example_exact_arithmetic() {
    exact_arithmetic::run_example().unwrap();
}

#[test]
fn example_isoduality() {
    isoduality::run_example().unwrap();
}

#[test]
fn example_lattice_files() {
    lattice_files::run_example().unwrap();
}

#[test]
fn example_rankin_minima() {
    rankin_minima::run_example().unwrap();
}

#[test]
fn example_slope_filtration() {
    slope_filtration::run_example().unwrap();
}

#[test]
fn example_tensor_heights() {
    tensor_heights::run_example().unwrap();
}

#[test]
fn example_theorem_harnesses() {
    theorem_harnesses::run_example().unwrap();
}
