//! Integer row/column reduction: Hermite forms, saturation, kernels and
//! completion of primitive sets to unimodular bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::{Rat, RatMatrix};

/// Result of column-reducing an `r x n` integer matrix `A`:
/// `A * U = [B | 0]` with `B` of full column rank `rank`, and `V = U^{-1}`.
pub struct ColumnEchelon {
    pub rank: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let (r, n) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut v = u.clone();
    let mut p = 0;
    for i in 0..r {
        if p == n {
            break;
        }
        loop {
            let best = (p..n)
                .filter(|&j| !m[i][j].is_zero())
                .min_by(|&x, &y| m[i][x].abs().cmp(&m[i][y].abs()));
            let Some(j) = best else { break };
            if j != p {
                for row in m.iter_mut() {
                    row.swap(p, j);
                }
                for row in u.iter_mut() {
                    row.swap(p, j);
                }
                v.swap(p, j);
            }
            let mut done = true;
            for j in p + 1..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[i][p]);
                if q.is_zero() {
                    done = false;
                    continue;
                }
                for row in m.iter_mut() {
                    let t = &q * &row[p];
                    row[j] -= t;
                }
                for row in u.iter_mut() {
                    let t = &q * &row[p];
                    row[j] -= t;
                }
                let (vp, vj) = pair_mut(&mut v, p, j);
                for (x, y) in vp.iter_mut().zip(vj.iter()) {
                    *x += &q * y;
                }
                if !m[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[i][p].is_zero() {
            continue;
        }
        if m[i][p].is_negative() {
            for row in m.iter_mut() {
                row[p] = -row[p].clone();
            }
            for row in u.iter_mut() {
                row[p] = -row[p].clone();
            }
            for x in v[p].iter_mut() {
                *x = -x.clone();
            }
        }
        p += 1;
    }
    ColumnEchelon { rank: p, u, v }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

/// Row-style Hermite normal form with zero rows removed: upper echelon,
/// positive pivots, entries above a pivot reduced into `[0, pivot)`.
pub fn hnf_rows(a: &IntMatrix) -> IntMatrix {
    let (r, n) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut pr = 0;
    for c in 0..n {
        if pr == r {
            break;
        }
        loop {
            let best = (pr..r)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&x, &y| m[x][c].abs().cmp(&m[y][c].abs()));
            let Some(i) = best else { break };
            m.swap(pr, i);
            let mut done = true;
            for i in pr + 1..r {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[pr][c]);
                let (top, rest) = m.split_at_mut(i);
                for (x, y) in rest[0].iter_mut().zip(top[pr].iter()) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pr][c].is_zero() {
            continue;
        }
        if m[pr][c].is_negative() {
            for x in m[pr].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..pr {
            let q = m[i][c].div_floor(&m[pr][c]);
            if q.is_zero() {
                continue;
            }
            let (top, rest) = m.split_at_mut(pr);
            for (x, y) in top[i].iter_mut().zip(rest[0].iter()) {
                *x -= &q * y;
            }
        }
        pr += 1;
    }
    m.truncate(pr);
    IntMatrix::from_rows(&m, n)
}

/// Basis (in Hermite normal form) of the saturation of the row span of
/// `gens`: every integer vector in its rational span.
pub fn saturate(gens: &IntMatrix) -> IntMatrix {
    let n = gens.cols();
    if gens.rows() == 0 {
        return IntMatrix::zeros(0, n);
    }
    let ce = column_echelon(gens);
    let rows: Vec<Vec<BigInt>> = ce.v[..ce.rank].to_vec();
    hnf_rows(&IntMatrix::from_rows(&rows, n))
}

/// Basis of the integer kernel `{x : gens * x = 0}`, as rows, in Hermite
/// normal form. The kernel is automatically saturated.
pub fn integer_kernel(gens: &IntMatrix) -> IntMatrix {
    let n = gens.cols();
    if gens.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let ce = column_echelon(gens);
    let rows: Vec<Vec<BigInt>> = (ce.rank..n)
        .map(|j| (0..n).map(|i| ce.u[i][j].clone()).collect())
        .collect();
    hnf_rows(&IntMatrix::from_rows(&rows, n))
}

/// Rows completing the primitive basis `prim` (k x n) to a basis of Z^n.
pub fn complete_basis(prim: &IntMatrix) -> IntMatrix {
    let n = prim.cols();
    let ce = column_echelon(prim);
    let rows: Vec<Vec<BigInt>> = ce.v[ce.rank..].to_vec();
    IntMatrix::from_rows(&rows, n)
}

/// Index of the row span of `gens` (full row rank) inside its saturation.
pub fn saturation_index(gens: &IntMatrix) -> BigInt {
    let ce = column_echelon(gens);
    // A * U = [B | 0]; the index is |det B|.
    let a = gens.to_rows();
    let k = ce.rank;
    let mut b = IntMatrix::zeros(a.len(), k);
    for (i, row) in a.iter().enumerate() {
        for j in 0..k {
            let mut s = BigInt::zero();
            for (l, x) in row.iter().enumerate() {
                s += x * &ce.u[l][j];
            }
            b[(i, j)] = s;
        }
    }
    if b.rows() != k {
        return BigInt::zero();
    }
    b.det().abs()
}

/// Coordinates `Y` with `rows = Y * basis`, if they exist over the integers.
pub fn express_in(basis: &IntMatrix, rows: &IntMatrix) -> Option<IntMatrix> {
    let k = basis.rows();
    let n = basis.cols();
    if rows.cols() != n {
        return None;
    }
    // Solve via the Gram system (B B^T) y = B x, exact over Q.
    let bq = basis.to_rat();
    let gram = bq.mul(&bq.transpose());
    let ginv = gram.inverse().ok()?;
    let mut out = IntMatrix::zeros(rows.rows(), k);
    for (i, x) in rows.row_iter().enumerate() {
        let xq = RatMatrix::from_vec(1, n, x.iter().map(|v| Rat::from_integer(v.clone())).collect());
        let y = xq.mul(&bq.transpose()).mul(&ginv);
        let back = y.mul(&bq);
        if back != xq {
            return None;
        }
        for j in 0..k {
            if !y[(0, j)].is_integer() {
                return None;
            }
            out[(i, j)] = y[(0, j)].to_integer();
        }
    }
    Some(out)
}

/// Whether the subgroup spanned by `basis` is saturated in Z^n.
pub fn is_saturated(basis: &IntMatrix) -> bool {
    basis.rows() == 0 || saturation_index(basis).is_one()
}
