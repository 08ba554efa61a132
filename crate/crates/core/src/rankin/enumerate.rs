//! Short vector enumeration (Fincke-Pohst on an LLL-reduced basis).
//!
//! The tree walk runs in double precision with a slack on every bound, so
//! it can only over-generate; every candidate is then filtered by its exact
//! norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::lll::lll_gram;
use crate::exact::{Rat, RatMatrix};
use crate::lattice::GramLattice;

const SLACK: f64 = 1e-9;

/// The Gram matrix as integers over a common denominator: `G = g / den`.
#[derive(Clone, Debug)]
pub struct IntForm {
    pub n: usize,
    pub g: Vec<Vec<i128>>,
    pub den: i128,
}

impl IntForm {
    pub fn new(gram: &RatMatrix) -> Result<Self> {
        let n = gram.rows();
        let den_big = gram.denominator_lcm();
        let den = den_big.to_i128().ok_or(Error::Overflow("Gram denominator"))?;
        let mut g = vec![vec![0i128; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let v = &gram[(i, j)] * Rat::from_integer(den_big.clone());
                *x = v.to_integer().to_i128().ok_or(Error::Overflow("Gram entry"))?;
            }
        }
        Ok(IntForm { n, g, den })
    }

    /// `x^T g y` (numerator over `den`).
    pub fn dot(&self, x: &[i64], y: &[i64]) -> Result<i128> {
        let mut s: i128 = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let mut t: i128 = 0;
            for j in 0..self.n {
                if y[j] != 0 {
                    t = self.g[i][j]
                        .checked_mul(y[j] as i128)
                        .and_then(|p| t.checked_add(p))
                        .ok_or(Error::Overflow("inner product"))?;
                }
            }
            s = t
                .checked_mul(x[i] as i128)
                .and_then(|p| s.checked_add(p))
                .ok_or(Error::Overflow("inner product"))?;
        }
        Ok(s)
    }

    pub fn to_rat(&self, num: i128) -> Rat {
        Rat::new(BigInt::from(num), BigInt::from(self.den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: Rat,
    /// Norm numerator over the lattice's [`IntForm`] denominator.
    pub norm_num: i128,
}

impl ShortVector {
    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }
}

/// All nonzero `v` with `v^T G v <= bound`, one per `±` pair (first nonzero
/// coordinate positive), sorted by norm then lexicographically.
pub fn short_vectors(l: &GramLattice, bound: &Rat) -> Result<Vec<ShortVector>> {
    short_vectors_limited(l, bound, u64::MAX)
}

/// As [`short_vectors`], failing with [`Error::Budget`] after `max_nodes`
/// tree nodes.
pub fn short_vectors_limited(l: &GramLattice, bound: &Rat, max_nodes: u64) -> Result<Vec<ShortVector>> {
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    let form = IntForm::new(l.gram())?;
    let red = lll_gram(l.gram());
    let n = l.rank();
    let t: Vec<Vec<i64>> = red
        .transform
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(Error::Overflow("LLL transform"))).collect())
        .collect::<Result<_>>()?;
    let gr: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rat_f64(&red.gram[(i, j)])).collect())
        .collect();
    let (q, mu) = ldl(&gr);
    let b = rat_f64(bound);
    let limit = b * (1.0 + SLACK) + 1e-300;

    // bound * den as a fraction, for the exact filter
    let bnum = bound.numer() * BigInt::from(form.den);
    let bden = bound.denom().clone();

    let mut out = Vec::new();
    let mut y = vec![0i64; n];
    let mut nodes = 0u64;
    let mut st = Walk {
        n,
        q: &q,
        mu: &mu,
        limit,
        y: &mut y,
        nodes: &mut nodes,
        max_nodes,
        emit: &mut |y: &[i64]| -> Result<()> {
            let mut x = vec![0i64; n];
            for (i, &yi) in y.iter().enumerate() {
                if yi == 0 {
                    continue;
                }
                for (xj, tij) in x.iter_mut().zip(&t[i]) {
                    *xj = tij
                        .checked_mul(yi)
                        .and_then(|p| xj.checked_add(p))
                        .ok_or(Error::Overflow("short vector coordinates"))?;
                }
            }
            if let Some(&f) = x.iter().find(|&&c| c != 0) {
                if f < 0 {
                    x.iter_mut().for_each(|c| *c = -*c);
                }
            }
            let num = form.dot(&x, &x)?;
            if BigInt::from(num) * &bden <= bnum {
                out.push(ShortVector { norm: form.to_rat(num), coords: x, norm_num: num });
            }
            Ok(())
        },
    };
    st.walk(n, 0.0, true)?;
    out.sort_by(|a, b| a.norm_num.cmp(&b.norm_num).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

pub(crate) fn rat_f64(x: &Rat) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as usize;
            let a = (n >> shift).to_f64().unwrap_or(0.0);
            let b = (d >> shift).to_f64().unwrap_or(1.0);
            a / b
        }
    }
}

/// `Q(y) = sum_i q_i (y_i + sum_{j>i} mu_ij y_j)^2`.
fn ldl(g: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = g.len();
    let mut a = g.to_vec();
    let mut q = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        q[i] = a[i][i];
        for j in i + 1..n {
            mu[i][j] = a[i][j] / q[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                a[j][k] -= mu[i][j] * a[i][k];
            }
        }
    }
    (q, mu)
}

struct Walk<'a, F: FnMut(&[i64]) -> Result<()>> {
    n: usize,
    q: &'a [f64],
    mu: &'a [Vec<f64>],
    limit: f64,
    y: &'a mut Vec<i64>,
    nodes: &'a mut u64,
    max_nodes: u64,
    emit: &'a mut F,
}

impl<F: FnMut(&[i64]) -> Result<()>> Walk<'_, F> {
    /// Choose `y[level-1]` given `y[level..]` with partial sum `used`.
    /// `upper_zero`: every coordinate above is 0, so only `y >= 0` is tried.
    fn walk(&mut self, level: usize, used: f64, upper_zero: bool) -> Result<()> {
        *self.nodes += 1;
        if *self.nodes > self.max_nodes {
            return Err(Error::Budget { nodes: self.max_nodes });
        }
        if level == 0 {
            if !upper_zero {
                (self.emit)(self.y)?;
            }
            return Ok(());
        }
        let i = level - 1;
        let c: f64 = -(i + 1..self.n).map(|j| self.mu[i][j] * self.y[j] as f64).sum::<f64>();
        let rem = (self.limit - used).max(0.0);
        let r = (rem / self.q[i]).sqrt() * (1.0 + SLACK) + 1e-9;
        let mut lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        if upper_zero {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            let d = v as f64 - c;
            let add = self.q[i] * d * d;
            if used + add > self.limit * (1.0 + SLACK) {
                continue;
            }
            self.y[i] = v;
            self.walk(level - 1, used + add, upper_zero && v == 0)?;
        }
        self.y[i] = 0;
        Ok(())
    }
}

/// Exact minimum norm of the lattice.
pub fn min_norm(l: &GramLattice) -> Result<Rat> {
    let red = lll_gram(l.gram());
    let mut b = red.gram[(0, 0)].clone();
    for i in 1..l.rank() {
        if red.gram[(i, i)] < b {
            b = red.gram[(i, i)].clone();
        }
    }
    let v = short_vectors(l, &b)?;
    v.first()
        .map(|s| s.norm.clone())
        .ok_or(Error::Invariant("no vector at the norm of a basis vector".into()))
}

/// Incremental rank test for integer vectors (fraction-free echelon).
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    /// Reduce `v` against the stored rows; push it and return `true` if it
    /// is independent.
    pub fn push(&mut self, v: &[i64]) -> bool {
        match self.reduce(v) {
            Some(r) => {
                self.rows.push(r);
                true
            }
            None => false,
        }
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }

    fn reduce(&self, v: &[i64]) -> Option<(usize, Vec<i128>)> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, row) in &self.rows {
            let a = w[*p];
            if a == 0 {
                continue;
            }
            let b = row[*p];
            let g = a.gcd(&b);
            let (fa, fb) = (b / g, a / g);
            for (x, y) in w.iter_mut().zip(row) {
                *x = *x * fa - *y * fb;
            }
            let c = w.iter().fold(0i128, |acc, x| acc.gcd(x));
            if c > 1 {
                w.iter_mut().for_each(|x| *x /= c);
            }
        }
        w.iter().position(|x| *x != 0).map(|p| (p, w))
    }
}

/// Index of the span of `rows` (independent) in its saturation, with
/// `None` on overflow.
pub(crate) fn saturation_index_small(rows: &[&[i64]]) -> Option<i128> {
    let k = rows.len();
    if k == 0 {
        return Some(1);
    }
    let n = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    // column operations bring row i to (b_i1..b_ii, 0..); index = prod |b_ii|
    let mut idx: i128 = 1;
    for i in 0..k {
        loop {
            let best = (i..n).filter(|&j| m[i][j] != 0).min_by_key(|&j| m[i][j].abs());
            let Some(j) = best else { return None };
            if j != i {
                for r in m.iter_mut() {
                    r.swap(i, j);
                }
            }
            let mut done = true;
            for j in i + 1..n {
                if m[i][j] == 0 {
                    continue;
                }
                let qt = Integer::div_floor(&m[i][j], &m[i][i]);
                for r in m.iter_mut() {
                    r[j] = r[j].checked_sub(qt.checked_mul(r[i])?)?;
                }
                if m[i][j] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        idx = idx.checked_mul(m[i][i].abs())?;
    }
    Some(idx)
}

/// Exact `det` of a small symmetric integer matrix (Bareiss), `None` on
/// overflow.
pub(crate) fn det_small(a: &[Vec<i128>]) -> Option<i128> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let p = (k + 1..n).find(|&i| m[i][k] != 0)?;
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

pub(crate) fn bigint_det(a: &[Vec<i128>]) -> BigInt {
    let n = a.len();
    let im = crate::exact::IntMatrix::from_rows(
        &a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>(),
        n,
    );
    im.det()
}
