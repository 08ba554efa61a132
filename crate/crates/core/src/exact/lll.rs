//! Exact LLL reduction of a Gram matrix. Used only as a preconditioner: the
//! returned transform is unimodular whatever the reduction quality.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{rat, IntMatrix, Rat, RatMatrix};

pub struct Reduced {
    /// Rows are the reduced basis in the original coordinates.
    pub transform: IntMatrix,
    pub gram: RatMatrix,
}

fn round(x: &Rat) -> BigInt {
    (x + rat(1, 2)).floor().to_integer()
}

/// Gram-Schmidt data of the Gram matrix `g`: (mu, squared GS norms).
fn gram_schmidt(g: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = g.len();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = g[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

pub fn lll_gram(gram: &RatMatrix) -> Reduced {
    let n = gram.rows();
    let mut g = gram.to_rows();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let delta = rat(99, 100);
    let mut k = 1;
    while k < n {
        let (mut mu, _) = gram_schmidt(&g);
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let qr = Rat::from_integer(q.clone());
            // b_k -= q b_j
            for c in 0..n {
                let tj = t[j][c].clone();
                t[k][c] -= &q * tj;
            }
            for c in 0..n {
                let v = &g[j][c] * &qr;
                g[k][c] -= v;
            }
            for r in 0..n {
                let v = &g[r][j] * &qr;
                g[r][k] -= v;
            }
            for l in 0..=j {
                let v = if l == j { Rat::one() } else { mu[j][l].clone() };
                mu[k][l] -= &qr * v;
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let lhs = &b[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            t.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    Reduced {
        transform: IntMatrix::from_rows(&t, n),
        gram: RatMatrix::from_rows(&g, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn reduces_skewed_basis() {
        // Z^2 in the basis (1,0), (7,1).
        let g = RatMatrix::from_int_rows(&[vec![1, 7], vec![7, 50]]);
        let r = lll_gram(&g);
        assert_eq!(r.gram, RatMatrix::identity(2));
        assert_eq!(r.transform.det().abs(), BigInt::one());
        let check = r.transform.to_rat().congruence(&g);
        assert_eq!(check, r.gram);
    }
}
