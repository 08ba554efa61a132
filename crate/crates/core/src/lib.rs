//! Exact reduction theory for Euclidean lattices given by rational Gram
//! matrices.
//!
//! Heights are kept as products of rational powers of primes
//! ([`exact::ExactPosReal`]), so every comparison is decided exactly.
//! On top of that sit Rankin minima and the slope (Grayson-Stuhler)
//! filtration in [`rankin`], similarities onto the dual lattice and
//! automorphism groups in [`symmetry`], and tensor-product minimal height
//! checks in [`bost`]. [`io`] and [`cli`] handle lattice files, reports
//! and batch runs.
//!
//! ```
//! use slopeforge::io::catalog;
//! use slopeforge::rankin::{gs_filtration, SearchConfig};
//!
//! let l = catalog("diag(1,4)").unwrap();
//! let f = gs_filtration(&l, &SearchConfig::default()).unwrap();
//! assert_eq!(f.len(), 2);
//! assert_eq!(f.quotient_heights[0].value.to_rat(), Some(slopeforge::exact::int(1)));
//! ```

pub mod error;
pub mod bost;
pub mod cli;
pub mod exact;
pub mod io;
pub mod lattice;
pub mod rankin;
pub mod report;
pub mod symmetry;

pub use error::{Error, Result};
