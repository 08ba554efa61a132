use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::exact::{ExactPosReal, Rat};

/// Squared height `H(E)^2 = det(Gram)` together with the rank, so that
/// reduced heights `H_r = H^(1/rank)` can be compared exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqHeight {
    pub value: ExactPosReal,
    pub rank: usize,
}

impl SqHeight {
    /// The zero space: rank 0, value 1.
    pub fn zero_space() -> Self {
        SqHeight { value: ExactPosReal::one(), rank: 0 }
    }

    pub fn new(value: ExactPosReal, rank: usize) -> Self {
        SqHeight { value, rank }
    }

    pub fn from_det(det: &Rat, rank: usize) -> Result<Self> {
        Ok(SqHeight { value: ExactPosReal::from_rat(det)?, rank })
    }

    /// `H_r^2 = value^(1/rank)`; 1 for the zero space.
    pub fn reduced(&self) -> ExactPosReal {
        if self.rank == 0 {
            return ExactPosReal::one();
        }
        self.value.pow(&Rat::new(1.into(), (self.rank as i64).into()))
    }

    /// Order of the reduced heights, decided as `a^(rank b)` against
    /// `b^(rank a)`.
    pub fn cmp_reduced(&self, other: &Self) -> Ordering {
        match (self.rank, other.rank) {
            (0, 0) => Ordering::Equal,
            (0, _) | (_, 0) => self.reduced().cmp_exact(&other.reduced()),
            (ra, rb) => self
                .value
                .powi(rb as i64)
                .cmp_exact(&other.value.powi(ra as i64)),
        }
    }

    /// Height of a direct sum / extension: values multiply, ranks add.
    pub fn mul(&self, other: &Self) -> Self {
        SqHeight {
            value: self.value.mul(&other.value),
            rank: self.rank + other.rank,
        }
    }

    /// Height of a quotient `self / sub`.
    pub fn div(&self, sub: &Self) -> Self {
        SqHeight {
            value: self.value.div(&sub.value),
            rank: self.rank - sub.rank,
        }
    }

    /// Effect of multiplying the Gram matrix by `s`: `value * s^rank`.
    pub fn scaled(&self, s: &ExactPosReal) -> Self {
        SqHeight {
            value: self.value.mul(&s.powi(self.rank as i64)),
            rank: self.rank,
        }
    }

    /// `deg = -ln H = -ln(value)/2`, for plotting.
    pub fn degree(&self) -> f64 {
        -0.5 * self.value.ln()
    }
}

impl fmt::Debug for SqHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SqHeight({} @ rank {})", self.value, self.rank)
    }
}

impl fmt::Display for SqHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^2 = {} (rank {}), H_r^2 = {}", self.value, self.rank, self.reduced())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn h(n: i64, d: i64, r: usize) -> SqHeight {
        SqHeight::from_det(&rat(n, d), r).unwrap()
    }

    #[test]
    fn cross_power_comparison() {
        // A2 itself against one of its roots: 3^1 < 2^2.
        assert_eq!(h(3, 1, 2).cmp_reduced(&h(2, 1, 1)), Ordering::Less);
        assert_eq!(h(4, 1, 2).cmp_reduced(&h(2, 1, 1)), Ordering::Equal);
        assert_eq!(h(1, 1, 3).cmp_reduced(&SqHeight::zero_space()), Ordering::Equal);
        assert_eq!(h(1, 2, 1).cmp_reduced(&SqHeight::zero_space()), Ordering::Less);
    }

    #[test]
    fn reduced_and_scaling() {
        assert_eq!(h(9, 1, 2).reduced(), ExactPosReal::from_rat(&rat(3, 1)).unwrap());
        let s = ExactPosReal::from_rat(&rat(1, 2)).unwrap();
        assert_eq!(h(4, 1, 2).scaled(&s), h(1, 1, 2));
    }
}
