//! Exact positive reals, inertia of rational forms and integer echelon
//! forms: the arithmetic every other computation rests on.

use std::cmp::Ordering;
use std::error::Error;

use slopeforge::exact::hnf::{hnf_rows, integer_kernel, saturate};
use slopeforge::exact::{rat, signature_exact, ExactPosReal, IntMatrix, RatMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // 2^(1/3) against 5/4: decided without floating point
    let a = ExactPosReal::from_rat(&rat(2, 1))?.pow(&rat(1, 3));
    let b = ExactPosReal::from_rat(&rat(5, 4))?;
    println!("{a} vs {b}: {:?}", a.cmp(&b));
    assert_eq!(a.cmp(&b), Ordering::Greater);

    let sqrt12 = ExactPosReal::from_rat(&rat(12, 1))?.sqrt();
    println!("sqrt(12) = {sqrt12}, squared = {}", sqrt12.powi(2));
    assert_eq!(sqrt12.powi(2).to_rat(), Some(rat(12, 1)));

    let hyperbolic = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
    let inertia = signature_exact(&hyperbolic)?;
    println!("hyperbolic plane: signature {}, Witt index {}", inertia.signature(), inertia.witt_index());
    assert_eq!((inertia.signature(), inertia.witt_index()), (0, 1));

    let gens = IntMatrix::from_i64(2, 3, &[2, 4, 6, 0, 3, 3]);
    println!("HNF rows: {:?}", hnf_rows(&gens).to_rows());
    println!("saturation: {:?}", saturate(&gens).to_rows());
    let k = integer_kernel(&gens);
    println!("integer kernel: {:?}", k.to_rows());
    assert_eq!(k.to_rows().len(), 1);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
