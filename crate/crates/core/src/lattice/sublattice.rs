use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{GramLattice, SqHeight};
use crate::error::{Error, Result};
use crate::exact::hnf::{complete_basis, express_in, hnf_rows, integer_kernel, saturate};
use crate::exact::{IntMatrix, Rat, RatMatrix};

/// A saturated sublattice, stored by its row Hermite basis (canonical, so
/// equality of subgroups is equality of bases).
#[derive(Clone)]
pub struct Sublattice {
    ambient: GramLattice,
    basis: IntMatrix,
    gram: RatMatrix,
    det: Rat,
}

impl Sublattice {
    pub fn new(ambient: &GramLattice, gens: &IntMatrix) -> Result<Self> {
        if gens.cols() != ambient.rank() {
            return Err(Error::Dimension(format!(
                "generators have {} columns, lattice has rank {}",
                gens.cols(),
                ambient.rank()
            )));
        }
        if gens.rows() == 0 {
            return Err(Error::Dimension("sublattice needs at least one generator".into()));
        }
        let r = gens.to_rat().rank();
        if r != gens.rows() {
            return Err(Error::Rank(format!(
                "{} generators span a space of dimension {r}",
                gens.rows()
            )));
        }
        Ok(Self::from_basis(ambient, saturate(gens)))
    }

    /// Saturated sublattice spanned by possibly dependent generators.
    pub fn span(ambient: &GramLattice, gens: &IntMatrix) -> Result<Self> {
        let basis = saturate(gens);
        if basis.rows() == 0 {
            return Err(Error::Dimension("generators span the zero space".into()));
        }
        Ok(Self::from_basis(ambient, basis))
    }

    pub fn full(ambient: &GramLattice) -> Self {
        Self::from_basis(ambient, IntMatrix::identity(ambient.rank()))
    }

    /// `basis` must already be saturated.
    pub(crate) fn from_basis(ambient: &GramLattice, basis: IntMatrix) -> Self {
        let basis = hnf_rows(&basis);
        let gram = basis.to_rat().congruence(ambient.gram());
        let det = gram.det().expect("square");
        Sublattice { ambient: ambient.clone(), basis, gram, det }
    }

    pub fn ambient(&self) -> &GramLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn induced_gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }

    pub fn sq_height(&self) -> SqHeight {
        SqHeight::from_det(&self.det, self.rank()).expect("det > 0 factors")
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient.rank()
    }

    /// The sublattice as a lattice in its own right (its Hermite basis).
    pub fn as_lattice(&self) -> GramLattice {
        GramLattice::new(self.gram.clone()).expect("induced form is positive definite")
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &Sublattice) -> bool {
        other.rank() <= self.rank() && express_in(&self.basis, &other.basis).is_some()
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        let row = IntMatrix::from_rows(&[v.to_vec()], v.len());
        express_in(&self.basis, &row).is_some()
    }

    /// Saturation of `self + other`.
    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        Self::from_basis(&self.ambient, saturate(&self.basis.vstack(&other.basis)))
    }

    /// Annihilator inside the dual lattice, in dual-basis coordinates.
    pub fn perp(&self) -> Result<Sublattice> {
        if self.is_full() {
            return Err(Error::Dimension("annihilator of the whole lattice is zero".into()));
        }
        let k = integer_kernel(&self.basis);
        Ok(Self::from_basis(&self.ambient.dual(), k))
    }

    /// Image under the coordinate map `x -> x * m`, saturated in `target`.
    pub fn map_rows(&self, target: &GramLattice, m: &IntMatrix) -> Result<Sublattice> {
        if m.rows() != self.ambient.rank() || m.cols() != target.rank() {
            return Err(Error::Dimension("coordinate map has the wrong shape".into()));
        }
        let img = self.basis.mul(m);
        if img.to_rat().rank() != self.rank() {
            return Err(Error::Rank("coordinate map is not injective on the sublattice".into()));
        }
        Ok(Self::from_basis(target, saturate(&img)))
    }

    /// `self (x) other` inside the tensor product of the ambients.
    pub fn tensor(&self, other: &Sublattice) -> Sublattice {
        let ambient = self.ambient.tensor_product(&other.ambient);
        Self::from_basis(&ambient, self.basis.kron(&other.basis))
    }

    /// Re-home the same coordinates in another lattice of the same rank.
    pub fn rehome(&self, ambient: &GramLattice) -> Sublattice {
        assert_eq!(ambient.rank(), self.ambient.rank());
        Self::from_basis(ambient, self.basis.clone())
    }
}

impl PartialEq for Sublattice {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.ambient.same_gram(&other.ambient)
    }
}

impl Eq for Sublattice {}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice(rank {}, basis {:?})", self.rank(), self.basis)
    }
}

/// `L / F` realised on the orthogonal projection of a complement of `F`.
#[derive(Clone, Debug)]
pub struct Quotient {
    lattice: GramLattice,
    sub: Sublattice,
    complement: IntMatrix,
}

impl Quotient {
    pub fn new(ambient: &GramLattice, f: &Sublattice) -> Result<Self> {
        let (n, k) = (ambient.rank(), f.rank());
        if k == 0 || k >= n {
            return Err(Error::Dimension(format!(
                "quotient needs 0 < rank F < rank L, got {k} of {n}"
            )));
        }
        let complement = complete_basis(f.basis());
        let g = ambient.gram();
        let fq = f.basis().to_rat();
        let cq = complement.to_rat();
        let gcc = cq.congruence(g);
        let gcf = cq.mul(g).mul(&fq.transpose());
        let gff_inv = f.induced_gram().inverse()?;
        let correction = gcf.mul(&gff_inv).mul(&gcf.transpose());
        let m = n - k;
        let mut q = RatMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                q[(i, j)] = &gcc[(i, j)] - &correction[(i, j)];
            }
        }
        let lattice = GramLattice::new(q)?;
        Ok(Quotient { lattice, sub: f.rehome(ambient), complement })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn sub(&self) -> &Sublattice {
        &self.sub
    }

    pub fn ambient(&self) -> &GramLattice {
        self.sub.ambient()
    }

    /// Rows (ambient coordinates) whose images form the quotient basis.
    pub fn complement(&self) -> &IntMatrix {
        &self.complement
    }

    /// Preimage in the ambient lattice of a sublattice of the quotient.
    pub fn lift(&self, q: &Sublattice) -> Result<Sublattice> {
        if q.ambient().rank() != self.lattice.rank() {
            return Err(Error::Dimension("sublattice does not live in this quotient".into()));
        }
        let up = q.basis().mul(&self.complement);
        Ok(Sublattice::from_basis(
            self.ambient(),
            saturate(&self.sub.basis().vstack(&up)),
        ))
    }

    /// Image in the quotient of a sublattice containing `F`.
    pub fn project(&self, s: &Sublattice) -> Result<Sublattice> {
        if !s.contains(&self.sub) || s.rank() == self.sub.rank() {
            return Err(Error::Dimension("projected sublattice must strictly contain F".into()));
        }
        let full = self.sub.basis().vstack(&self.complement);
        let inv = full.unimodular_inverse()?;
        let coords = s.basis().mul(&inv);
        let k = self.sub.rank();
        let m = self.lattice.rank();
        let mut rows = Vec::new();
        for r in coords.row_iter() {
            let tail: Vec<BigInt> = r[k..].to_vec();
            if tail.iter().any(|x| !x.is_zero()) {
                rows.push(tail);
            }
        }
        Sublattice::span(&self.lattice, &IntMatrix::from_rows(&rows, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows[0].len();
        let data: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        IntMatrix::from_i64(rows.len(), cols, &data)
    }

    fn a2() -> GramLattice {
        GramLattice::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap()
    }

    fn d14() -> GramLattice {
        GramLattice::diag(&[rat(1, 1), rat(4, 1)]).unwrap()
    }

    #[test]
    fn induced_forms() {
        let s = d14().sublattice(&im(&[&[1, 0]])).unwrap();
        assert_eq!(s.induced_gram(), &RatMatrix::from_int_rows(&[vec![1]]));
        let s = GramLattice::standard(2).sublattice(&im(&[&[2, 0]])).unwrap();
        assert_eq!(s.basis(), &im(&[&[1, 0]]));
        let s = a2().sublattice(&im(&[&[1, 1]])).unwrap();
        assert_eq!(s.induced_gram(), &RatMatrix::from_int_rows(&[vec![6]]));
        assert!(matches!(a2().sublattice(&im(&[&[1, 1], &[2, 2]])), Err(Error::Rank(_))));
    }

    #[test]
    fn quotients() {
        let f = d14().sublattice(&im(&[&[1, 0]])).unwrap();
        let q = d14().quotient(&f).unwrap();
        assert_eq!(q.lattice().gram(), &RatMatrix::from_int_rows(&[vec![4]]));
        let f = a2().sublattice(&im(&[&[1, 0]])).unwrap();
        let q = a2().quotient(&f).unwrap();
        assert_eq!(q.lattice().gram(), &RatMatrix::diagonal(&[rat(3, 2)]));
        assert!(a2().quotient(&a2().full()).is_err());
        let top = q.lift(&q.lattice().full()).unwrap();
        assert!(top.is_full());
    }

    #[test]
    fn annihilator_and_dual_quotient() {
        let l = d14();
        let f = l.sublattice(&im(&[&[1, 0]])).unwrap();
        let p = f.perp().unwrap();
        assert_eq!(p.basis(), &im(&[&[0, 1]]));
        let q = l.dual().quotient(&p).unwrap();
        assert!(q.lattice().same_gram(&f.as_lattice().dual()));
    }

    #[test]
    fn lift_project_roundtrip() {
        let l = GramLattice::from_int_rows(&[vec![3, 1, 0], vec![1, 3, 1], vec![0, 1, 3]]).unwrap();
        let f = l.sublattice(&im(&[&[1, 1, 0]])).unwrap();
        let q = l.quotient(&f).unwrap();
        let s = q.lattice().sublattice(&im(&[&[1, 1]])).unwrap();
        let up = q.lift(&s).unwrap();
        assert_eq!(up.rank(), 2);
        assert!(up.contains(&f));
        assert_eq!(q.project(&up).unwrap(), s);
        assert_eq!(up.det() , &(f.det() * s.det()));
    }
}
