//! Exact arithmetic kernel: rationals, matrices, integer reduction,
//! inertia and the exact positive reals used for height comparisons.

pub mod epr;
pub mod factor;
pub mod hnf;
pub mod lll;
pub mod matrix;
pub mod signature;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use epr::ExactPosReal;
pub use hnf::saturate;
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use signature::{signature_exact, Inertia};

use crate::error::Result;

/// Arbitrary precision rational, always in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn det_exact(m: &RatMatrix) -> Result<Rat> {
    m.det()
}

/// Parse `p` or `p/q` (decimal, optional leading minus, `q > 0`).
pub fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse_int = |t: &str, what: &str| -> std::result::Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed {what} `{t}` in rational `{s}`"));
        }
        t.parse::<BigInt>()
            .map_err(|e| format!("malformed {what} `{t}`: {e}"))
    };
    let n = parse_int(num, "numerator")?;
    let d = match den {
        Some(d) => {
            if d.starts_with('-') {
                return Err(format!("negative denominator in `{s}`"));
            }
            parse_int(d, "denominator")?
        }
        None => BigInt::from(1),
    };
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}
