//! Inertia of a symmetric rational matrix by congruence elimination.

use num_traits::{Signed, Zero};

use super::{Rat, RatMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    /// `plus - minus`.
    pub fn signature(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }

    /// Dimension of a maximal totally isotropic subspace of the
    /// nondegenerate part.
    pub fn witt_index(&self) -> usize {
        self.plus.min(self.minus)
    }
}

/// Sylvester inertia of a symmetric matrix.
///
/// Diagonal pivots are eliminated one at a time; when every remaining
/// diagonal entry vanishes but some off-diagonal `a_ij` does not, the block
/// `[[0, a], [a, 0]]` is split off as a hyperbolic plane contributing
/// `(+1, -1)`.
pub fn signature_exact(m: &RatMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::Shape("signature of a non-symmetric matrix".into()));
    }
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let (mut plus, mut minus) = (0, 0);
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pos);
            let d = a[p][p].clone();
            if d.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &d;
                for &j in &active {
                    let t = &f * &a[p][j];
                    a[i][j] -= t;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((p, q)) = pair else { break };
        active.retain(|&i| i != p && i != q);
        plus += 1;
        minus += 1;
        // Schur complement of the block [[0, c], [c, 0]]: its inverse is
        // [[0, 1/c], [1/c, 0]].
        let c = a[p][q].clone();
        let rows: Vec<(usize, Rat, Rat)> = active
            .iter()
            .map(|&i| (i, a[i][p].clone(), a[i][q].clone()))
            .collect();
        for (i, ip, iq) in &rows {
            for (j, jp, jq) in &rows {
                let t = (ip * jq + iq * jp) / &c;
                a[*i][*j] -= t;
            }
        }
    }
    let zero = m.rows() - plus - minus;
    Ok(Inertia { plus, minus, zero })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_examples() {
        let i3 = RatMatrix::identity(3);
        assert_eq!(signature_exact(&i3).unwrap(), Inertia { plus: 3, minus: 0, zero: 0 });
        let h = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature_exact(&h).unwrap(), Inertia { plus: 1, minus: 1, zero: 0 });
        let d = RatMatrix::from_int_rows(&[vec![1, 0], vec![0, -4]]);
        assert_eq!(signature_exact(&d).unwrap(), Inertia { plus: 1, minus: 1, zero: 0 });
    }

    #[test]
    fn degenerate_and_mixed() {
        let m = RatMatrix::from_int_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        assert_eq!(signature_exact(&m).unwrap(), Inertia { plus: 1, minus: 1, zero: 1 });
        let m = RatMatrix::from_int_rows(&[vec![0, 2, 1], vec![2, 0, 1], vec![1, 1, 0]]);
        // trace 0 and det 4 > 0 force one positive and two negative eigenvalues
        let i = signature_exact(&m).unwrap();
        assert_eq!(i.rank(), 3);
        assert_eq!(m.det().unwrap(), Rat::from_integer(4.into()));
        assert_eq!((i.plus, i.minus), (1, 2));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = RatMatrix::from_int_rows(&[vec![1, 2], vec![0, 1]]);
        assert!(matches!(signature_exact(&m), Err(Error::Shape(_))));
    }
}
