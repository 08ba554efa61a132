//! Exact positive reals of the form `prod p^(e_p)` with rational exponents.
//!
//! Every height, reduced height and scaling factor that shows up over Q is a
//! rational power of a positive rational, so this group is closed under all
//! the operations the crate needs and comparisons are decidable exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::factor::factorize;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactPosReal {
    /// prime -> nonzero exponent
    factors: BTreeMap<BigUint, Rat>,
}

impl ExactPosReal {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_rat(q: &Rat) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!(
                "exact positive real from non-positive {q}"
            )));
        }
        let mut factors = BTreeMap::new();
        for (p, e) in factorize(q.numer().magnitude())? {
            factors.insert(p, Rat::from_integer(BigInt::from(e)));
        }
        for (p, e) in factorize(q.denom().magnitude())? {
            factors.insert(p, -Rat::from_integer(BigInt::from(e)));
        }
        Ok(ExactPosReal { factors })
    }

    /// Build from (prime, exponent) pairs. Primality of the keys is the
    /// caller's responsibility.
    pub fn from_factors(pairs: impl IntoIterator<Item = (BigUint, Rat)>) -> Self {
        let mut out = ExactPosReal::one();
        for (p, e) in pairs {
            out.add_exponent(p, e);
        }
        out
    }

    fn add_exponent(&mut self, p: BigUint, e: Rat) {
        if e.is_zero() {
            return;
        }
        let entry = self.factors.entry(p.clone()).or_insert_with(Rat::zero);
        *entry += e;
        if entry.is_zero() {
            self.factors.remove(&p);
        }
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, Rat> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            out.add_exponent(p.clone(), e.clone());
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Self {
        ExactPosReal {
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), -e.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: &Rat) -> Self {
        if e.is_zero() {
            return ExactPosReal::one();
        }
        ExactPosReal {
            factors: self
                .factors
                .iter()
                .map(|(p, x)| (p.clone(), x * e))
                .collect(),
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        self.pow(&Rat::from_integer(e.into()))
    }

    /// The square root.
    pub fn sqrt(&self) -> Self {
        self.pow(&Rat::new(1.into(), 2.into()))
    }

    pub fn is_rational(&self) -> bool {
        self.factors.values().all(|e| e.is_integer())
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if !self.is_rational() {
            return None;
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.factors {
            let k = e.to_integer();
            let pk = Pow::pow(BigInt::from(p.clone()), k.magnitude());
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        Some(Rat::new(num, den))
    }

    /// Natural logarithm in double precision; rendering only.
    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|(p, e)| {
                let lp = ln_biguint(p);
                lp * e.numer().to_f64().unwrap_or(f64::NAN) / e.denom().to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// Exact comparison: clear exponent denominators and compare the two
    /// resulting integers.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let q = self.div(other);
        if q.is_one() {
            return Ordering::Equal;
        }
        let l = q
            .factors
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &q.factors {
            let k = (e * Rat::from_integer(l.clone())).to_integer();
            let pk = Pow::pow(BigInt::from(p.clone()), k.magnitude());
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        num.cmp(&den)
    }

    /// Exact comparison against a positive rational, without factoring it.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        let l = self
            .factors
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let lu = l.to_usize().expect("exponent denominators are small");
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.factors {
            let k = (e * Rat::from_integer(l.clone())).to_integer();
            let pk = Pow::pow(BigInt::from(p.clone()), k.magnitude());
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        let lhs = Rat::new(num, den);
        lhs.cmp(&num_traits::pow(r.clone(), lu))
    }

    /// A rational `r >= self`, close to it in relative terms.
    pub fn rat_upper(&self) -> Rat {
        if let Some(q) = self.to_rat() {
            return q;
        }
        let approx = self.to_f64() * (1.0 + 1e-9);
        let mut r = Rat::from_float(approx).unwrap_or_else(|| Rat::from_integer(BigInt::one()));
        let two = Rat::from_integer(BigInt::from(2));
        while self.cmp_rat(&r) == Ordering::Greater || !r.is_positive() {
            r = if r.is_positive() { r * &two } else { Rat::from_integer(BigInt::one()) };
        }
        r
    }

    pub fn min(self, other: Self) -> Self {
        if self.cmp_exact(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

fn ln_biguint(p: &BigUint) -> f64 {
    match p.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = p.bits();
            let shift = bits.saturating_sub(60);
            let top = (p >> shift).to_f64().unwrap_or(1.0);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

impl PartialOrd for ExactPosReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactPosReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

/// Rational values print as `p/q`; everything else as `p^(e)*...`.
impl fmt::Display for ExactPosReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rat() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactPosReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPosReal({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn e(n: i64) -> ExactPosReal {
        ExactPosReal::from_rat(&rat(n, 1)).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let twelve = e(12);
        let want = ExactPosReal::from_factors([
            (BigUint::from(2u32), rat(2, 1)),
            (BigUint::from(3u32), rat(1, 1)),
        ]);
        assert_eq!(twelve, want);
        assert!(e(1).is_one());
        let nine_halves = ExactPosReal::from_rat(&rat(9, 2)).unwrap();
        assert_eq!(nine_halves.factors()[&BigUint::from(3u32)], rat(2, 1));
        assert_eq!(nine_halves.factors()[&BigUint::from(2u32)], rat(-1, 1));
        assert!(ExactPosReal::from_rat(&rat(0, 1)).is_err());
        assert!(ExactPosReal::from_rat(&rat(-2, 1)).is_err());
    }

    #[test]
    fn powers_and_products() {
        let half = rat(1, 2);
        assert_eq!(e(4).pow(&half), e(2));
        let r2 = e(2).pow(&half);
        assert_eq!(r2.mul(&r2), e(2));
        assert_eq!(e(2).pow(&half).cmp_exact(&e(3).pow(&rat(1, 4))), Ordering::Greater);
        assert_eq!(e(6).div(&e(6)), ExactPosReal::one());
    }

    #[test]
    fn against_rationals() {
        let r3 = e(3).pow(&rat(1, 2));
        assert_eq!(r3.cmp_rat(&rat(17, 10)), Ordering::Greater);
        assert_eq!(r3.cmp_rat(&rat(7, 4)), Ordering::Less);
        assert_eq!(e(4).cmp_rat(&rat(4, 1)), Ordering::Equal);
        assert_ne!(r3.cmp_rat(&r3.rat_upper()), Ordering::Greater);
        assert!(crate::exact::epr::tests::close(&r3.rat_upper(), 3f64.sqrt()));
    }

    fn close(r: &Rat, x: f64) -> bool {
        let f = r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        (f - x).abs() < 1e-6
    }

    #[test]
    fn display() {
        assert_eq!(e(3).pow(&rat(1, 2)).to_string(), "3^(1/2)");
        assert_eq!(ExactPosReal::from_rat(&rat(1, 4)).unwrap().to_string(), "1/4");
    }
}
