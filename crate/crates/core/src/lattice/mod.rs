//! Euclidean lattices given by a rational Gram matrix, and the standard
//! constructions on them.

mod height;
mod sublattice;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use height::SqHeight;
pub use sublattice::{Quotient, Sublattice};

use crate::error::{Error, Result};
use crate::exact::{ExactPosReal, IntMatrix, Rat, RatMatrix};

/// The lattice `Z^n` with inner product `x^T G y`. Cheap to clone.
#[derive(Clone)]
pub struct GramLattice {
    inner: Arc<Inner>,
}

struct Inner {
    gram: RatMatrix,
    label: Option<String>,
    det: Rat,
}

impl GramLattice {
    /// Validate a Gram matrix: square, symmetric, positive definite.
    pub fn new(gram: RatMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Dimension(format!(
                "Gram matrix must be square and nonempty, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::Shape("Gram matrix is not symmetric".into()));
        }
        let det = check_positive_definite(&gram)?;
        Ok(GramLattice {
            inner: Arc::new(Inner { gram, label: None, det }),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RatMatrix::from_int_rows(rows))
    }

    pub fn diag(entries: &[Rat]) -> Result<Self> {
        Self::new(RatMatrix::diagonal(entries))
    }

    /// `Z^n` with the standard form.
    pub fn standard(n: usize) -> Self {
        Self::new(RatMatrix::identity(n))
            .expect("identity is positive definite")
            .with_label(format!("Z{n}"))
    }

    pub fn with_label(self, label: impl Into<String>) -> Self {
        GramLattice {
            inner: Arc::new(Inner {
                gram: self.inner.gram.clone(),
                label: Some(label.into()),
                det: self.inner.det.clone(),
            }),
        }
    }

    pub fn label(&self) -> Option<&str> {
        self.inner.label.as_deref()
    }

    pub fn name(&self) -> String {
        self.inner.label.clone().unwrap_or_else(|| "lattice".into())
    }

    pub fn rank(&self) -> usize {
        self.inner.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.inner.gram
    }

    pub fn det(&self) -> &Rat {
        &self.inner.det
    }

    pub fn sq_height(&self) -> SqHeight {
        SqHeight::from_det(self.det(), self.rank()).expect("det > 0 factors")
    }

    pub fn try_sq_height(&self) -> Result<SqHeight> {
        SqHeight::from_det(self.det(), self.rank())
    }

    /// Whether `G` has integer entries and determinant 1.
    pub fn is_unimodular(&self) -> bool {
        self.gram().as_slice().iter().all(|x| x.is_integer()) && self.det() == &Rat::from_integer(1.into())
    }

    /// `x^T G y` for integer coordinate vectors.
    pub fn inner_product(&self, x: &[BigInt], y: &[BigInt]) -> Rat {
        let g = self.gram();
        let n = self.rank();
        let mut s = Rat::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let mut t = Rat::zero();
            for j in 0..n {
                if !y[j].is_zero() {
                    t += &g[(i, j)] * Rat::from_integer(y[j].clone());
                }
            }
            s += t * Rat::from_integer(x[i].clone());
        }
        s
    }

    pub fn norm(&self, x: &[BigInt]) -> Rat {
        self.inner_product(x, x)
    }

    /// The dual lattice in the dual basis: Gram `G^{-1}`.
    pub fn dual(&self) -> GramLattice {
        let gram = self.gram().inverse().expect("positive definite is invertible");
        let det = self.det().recip();
        GramLattice {
            inner: Arc::new(Inner {
                gram,
                label: self.label().map(|l| format!("dual({l})")),
                det,
            }),
        }
    }

    /// `E[t]` with `s = t^2`: Gram multiplied by `s`.
    pub fn scale(&self, s: &Rat) -> Result<GramLattice> {
        if !s.is_positive() {
            return Err(Error::Domain(format!("scale factor must be positive, got {s}")));
        }
        let n = self.rank() as u32;
        let det = self.det() * num_traits::pow(s.clone(), n as usize);
        Ok(GramLattice {
            inner: Arc::new(Inner {
                gram: self.gram().scaled(s),
                label: self.label().map(|l| format!("{l}[{s}]")),
                det,
            }),
        })
    }

    /// Orthogonal direct sum, block-diagonal Gram.
    pub fn direct_product(&self, other: &GramLattice) -> GramLattice {
        GramLattice {
            inner: Arc::new(Inner {
                gram: self.gram().block_diag(other.gram()),
                label: join_labels(self, other, "x"),
                det: self.det() * other.det(),
            }),
        }
    }

    /// Tensor product with basis `e_i (x) f_j` at index `i * rank(F) + j`.
    pub fn tensor_product(&self, other: &GramLattice) -> GramLattice {
        let (n, m) = (self.rank(), other.rank());
        let det = num_traits::pow(self.det().clone(), m) * num_traits::pow(other.det().clone(), n);
        GramLattice {
            inner: Arc::new(Inner {
                gram: self.gram().kron(other.gram()),
                label: join_labels(self, other, "(x)"),
                det,
            }),
        }
    }

    /// The saturated sublattice spanned rationally by the rows of `gens`.
    pub fn sublattice(&self, gens: &IntMatrix) -> Result<Sublattice> {
        Sublattice::new(self, gens)
    }

    pub fn full(&self) -> Sublattice {
        Sublattice::full(self)
    }

    pub fn quotient(&self, f: &Sublattice) -> Result<Quotient> {
        Quotient::new(self, f)
    }

    /// `F^perp` inside the dual lattice (dual-basis coordinates).
    pub fn perp(&self, f: &Sublattice) -> Result<Sublattice> {
        f.perp()
    }

    /// Same Gram matrix (labels ignored).
    pub fn same_gram(&self, other: &GramLattice) -> bool {
        self.gram() == other.gram()
    }

    /// Exact multiplier `s` for the squared height of a scaled lattice, for
    /// callers that track scales symbolically.
    pub fn scaled_height(&self, s: &ExactPosReal) -> SqHeight {
        self.sq_height().scaled(s)
    }
}

fn join_labels(a: &GramLattice, b: &GramLattice, op: &str) -> Option<String> {
    match (a.label(), b.label()) {
        (Some(x), Some(y)) => Some(format!("{x}{op}{y}")),
        _ => None,
    }
}

/// Symmetric elimination; returns det or the first non-positive leading
/// principal minor.
fn check_positive_definite(g: &RatMatrix) -> Result<Rat> {
    let n = g.rows();
    let mut a = g.to_rows();
    let mut minor = Rat::from_integer(1.into());
    for k in 0..n {
        let p = a[k][k].clone();
        minor *= &p;
        if !p.is_positive() {
            // p is the pivot only while all earlier minors are positive; the
            // leading minor of order k+1 is then exactly `minor`.
            return Err(Error::Definiteness { order: k + 1, value: minor });
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            a[i][k] = Rat::zero();
        }
    }
    Ok(minor)
}

impl PartialEq for GramLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram() == other.gram() && self.label() == other.label()
    }
}

impl Eq for GramLattice {}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "GramLattice({l}: {:?})", self.gram()),
            None => write!(f, "GramLattice({:?})", self.gram()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn a2() -> GramLattice {
        GramLattice::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap()
    }

    fn d14() -> GramLattice {
        GramLattice::diag(&[rat(1, 1), rat(4, 1)]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(a2().det(), &rat(3, 1));
        match GramLattice::from_int_rows(&[vec![1, 2], vec![2, 1]]) {
            Err(Error::Definiteness { order, value }) => {
                assert_eq!(order, 2);
                assert_eq!(value, rat(-3, 1));
            }
            other => panic!("expected definiteness error, got {other:?}"),
        }
        assert!(matches!(
            GramLattice::from_int_rows(&[vec![1, 0], vec![1, 1]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            GramLattice::from_int_rows(&[vec![0, 0], vec![0, 1]]),
            Err(Error::Definiteness { order: 1, .. })
        ));
    }

    #[test]
    fn dual_and_scale() {
        let d = d14().dual();
        assert_eq!(d.gram(), &RatMatrix::diagonal(&[rat(1, 1), rat(1, 4)]));
        assert_eq!(d.sq_height(), SqHeight::from_det(&rat(1, 4), 2).unwrap());
        assert!(d.dual().same_gram(&d14()));
        let s = d14().scale(&rat(1, 2)).unwrap();
        assert_eq!(s.gram(), &RatMatrix::diagonal(&[rat(1, 2), rat(2, 1)]));
        assert_eq!(s.det(), &rat(1, 1));
        assert!(d14().scale(&rat(0, 1)).is_err());
        assert!(d14().scale(&rat(1, 1)).unwrap().same_gram(&d14()));
    }

    #[test]
    fn products() {
        let t = d14().tensor_product(&d14());
        assert_eq!(
            t.gram(),
            &RatMatrix::diagonal(&[rat(1, 1), rat(4, 1), rat(4, 1), rat(16, 1)])
        );
        assert_eq!(a2().tensor_product(&a2()).det(), &rat(81, 1));
        assert_eq!(a2().tensor_product(&a2()).gram().det().unwrap(), rat(81, 1));
        assert!(GramLattice::standard(2)
            .tensor_product(&GramLattice::standard(3))
            .same_gram(&GramLattice::standard(6)));
        assert_eq!(a2().direct_product(&d14()).det(), &rat(12, 1));
    }
}
