//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's enumeration, reduction or height code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slopeforge::exact::{IntMatrix, RatMatrix};
use slopeforge::lattice::{GramLattice, Sublattice};
use slopeforge::rankin::{subquotient, validate_filtration, Filtration, SearchConfig};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric entries in -3..=3, diagonal loaded past the off-diagonal row
/// sums, then divided by 1, 2 or 3.
pub fn random_lattice(r: &mut ChaCha8Rng, n: usize) -> GramLattice {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = r.gen_range(-3..=3);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    for i in 0..n {
        let off: i64 = (0..n).filter(|&j| j != i).map(|j| m[i][j].abs()).sum();
        m[i][i] = off + r.gen_range(1..=3);
    }
    let den = r.gen_range(1..=3);
    let data: Vec<Q> = m.iter().flatten().map(|&x| q(x, den)).collect();
    GramLattice::new(RatMatrix::from_vec(n, n, data)).expect("diagonally dominant")
}

pub fn random_rank2(r: &mut ChaCha8Rng) -> GramLattice {
    loop {
        let (a, b, c) = (r.gen_range(1..=9), r.gen_range(-4..=4), r.gen_range(1..=9));
        if a * c > b * b {
            let den = r.gen_range(1..=4);
            let data = vec![q(a, den), q(b, den), q(b, den), q(c, den)];
            return GramLattice::new(RatMatrix::from_vec(2, 2, data)).expect("definite");
        }
    }
}

pub fn rat_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Integer Bareiss determinant.
pub fn int_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Maximal minors with sign fixed and content removed: a key for the
/// rational span, hence for the saturated sublattice. Also returns the
/// content (the saturation index of the rows).
pub fn plucker(rows: &[Vec<i128>], n: usize) -> (Vec<i128>, i128) {
    let k = rows.len();
    let mut minors: Vec<i128> = choose(n, k)
        .iter()
        .map(|cols| int_det(&rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect::<Vec<_>>()))
        .collect();
    let g = minors.iter().fold(0i128, |g, &m| g.gcd(&m));
    if g == 0 {
        return (minors, 0);
    }
    let s = if minors.iter().find(|&&m| m != 0).copied().unwrap_or(1) < 0 { -g } else { g };
    for m in &mut minors {
        *m /= s;
    }
    (minors, g)
}

pub fn basis_rows(b: &IntMatrix) -> Vec<Vec<i128>> {
    b.row_iter().map(|r| r.iter().map(|x| x.to_i128().expect("small")).collect()).collect()
}

pub fn sub_key(s: &Sublattice) -> Vec<i128> {
    plucker(&basis_rows(s.basis()), s.ambient().rank()).0
}

/// Exact integer form: `G = g / den`.
pub struct Oracle {
    pub n: usize,
    pub g: Vec<Vec<i128>>,
    pub den: i128,
}

#[derive(Clone, Debug)]
pub struct RankMin {
    pub k: usize,
    pub det: Q,
    pub keys: BTreeSet<Vec<i128>>,
}

#[derive(Clone, Debug)]
pub struct OracleFiltration {
    /// Ranks `0 = k_0 < ... < k_l = n` of the steps.
    pub ranks: Vec<usize>,
    pub dets: Vec<Q>,
    pub keys: Vec<Vec<i128>>,
}

impl Oracle {
    pub fn new(l: &GramLattice) -> Self {
        let n = l.rank();
        let gram = l.gram();
        let den = (0..n * n).fold(BigInt::one(), |a, i| a.lcm(gram.as_slice()[i].denom()));
        let g = (0..n)
            .map(|i| (0..n).map(|j| (&gram[(i, j)] * Q::from_integer(den.clone())).to_integer().to_i128().unwrap()).collect())
            .collect();
        Oracle { n, g, den: den.to_i128().unwrap() }
    }

    pub fn dot(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s = 0i128;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                s += x[i] as i128 * self.g[i][j] * y[j] as i128;
            }
        }
        s
    }

    /// Every nonzero vector of scaled norm at most `bound` in a box derived
    /// from the inverse Gram. One of each `+-v` unless `both_signs`.
    pub fn vectors(&self, bound: i128, both_signs: bool) -> Vec<(Vec<i64>, i128)> {
        let n = self.n;
        let gf: Vec<Vec<f64>> = self.g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let inv = invert_f64(&gf);
        let b: Vec<i64> = (0..n).map(|i| ((bound as f64 * inv[i][i]).max(0.0).sqrt() * (1.0 + 1e-9)).floor() as i64 + 1).collect();
        let mut x: Vec<i64> = b.iter().map(|&v| -v).collect();
        let mut out = Vec::new();
        loop {
            if x.iter().any(|&v| v != 0) {
                let first = x.iter().find(|&&v| v != 0).copied().unwrap();
                if both_signs || first > 0 {
                    let nn = self.dot(&x, &x);
                    if nn <= bound {
                        out.push((x.clone(), nn));
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                    return out;
                }
                x[i] += 1;
                if x[i] <= b[i] {
                    break;
                }
                x[i] = -b[i];
                i += 1;
            }
        }
    }

    pub fn lambda1(&self) -> i128 {
        let m = (0..self.n).map(|i| self.g[i][i]).min().unwrap();
        self.vectors(m, false)[0].1
    }

    fn principal_minor_bound(&self, k: usize) -> i128 {
        choose(self.n, k)
            .iter()
            .map(|c| int_det(&c.iter().map(|&i| c.iter().map(|&j| self.g[i][j]).collect()).collect::<Vec<_>>()))
            .min()
            .unwrap()
    }

    /// `d_k` for `k = 0..=n` with every minimizer, from all tuples whose
    /// norm product is at most `factor * gamma_k * D_k` (Minkowski), with
    /// `D_k` the least principal minor. Returns the results at factor 1
    /// and at `factor`.
    pub fn rankin(&self, factor: i128) -> (Vec<RankMin>, Vec<RankMin>) {
        let n = self.n;
        let lam = self.lambda1();
        let mut caps = vec![(0i128, 0i128, 0u32); n + 1];
        let mut vbound = lam;
        for k in 1..n {
            let e = (k * (k - 1) / 2) as u32;
            let d = self.principal_minor_bound(k);
            caps[k] = (d, 0, e);
            let big = factor * 4i128.pow(e) * d / (3i128.pow(e) * lam.pow(k as u32 - 1));
            vbound = vbound.max(big);
        }
        let vecs = self.vectors(vbound, false);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let full = int_det(&self.g);
        let den_q = |k: usize| Q::from_integer(BigInt::from(self.den).pow(k as u32));
        for k in 0..=n {
            if k == 0 || k == n {
                let det = if k == 0 { Q::one() } else { Q::from_integer(full.into()) / den_q(n) };
                let key = if k == 0 { Vec::new() } else { vec![1] };
                let rm = RankMin { k, det, keys: BTreeSet::from([key]) };
                lo.push(rm.clone());
                hi.push(rm);
                continue;
            }
            let (d, _, e) = caps[k];
            let lim_hi = factor * 4i128.pow(e) * d;
            let lim_lo = 4i128.pow(e) * d;
            let scale = 3i128.pow(e);
            let mut found_hi: BTreeMap<Vec<i128>, (i128, i128)> = BTreeMap::new();
            let mut found_lo: BTreeMap<Vec<i128>, (i128, i128)> = BTreeMap::new();
            let mut idx = Vec::with_capacity(k);
            self.tuples(&vecs, k, 0, 1, scale, lim_hi, &mut idx, &mut |idx: &[usize], prod: i128| {
                let rows: Vec<Vec<i128>> = idx.iter().map(|&i| vecs[i].0.iter().map(|&v| v as i128).collect()).collect();
                let (key, content) = plucker(&rows, n);
                if content == 0 {
                    return;
                }
                let gram: Vec<Vec<i128>> =
                    idx.iter().map(|&a| idx.iter().map(|&b| self.dot(&vecs[a].0, &vecs[b].0)).collect()).collect();
                let det = int_det(&gram);
                // det of the saturation is det / content^2 (exact)
                let val = (det, content * content);
                if prod * scale <= lim_lo {
                    found_lo.entry(key.clone()).or_insert(val);
                }
                found_hi.entry(key).or_insert(val);
            });
            let to_min = |found: BTreeMap<Vec<i128>, (i128, i128)>| {
                let mut best: Option<Q> = None;
                let mut keys = BTreeSet::new();
                for (key, (d, c2)) in found {
                    let v = Q::new(d.into(), c2.into()) / den_q(k);
                    match &best {
                        Some(b) if &v > b => {}
                        Some(b) if &v == b => {
                            keys.insert(key);
                        }
                        _ => {
                            best = Some(v);
                            keys = BTreeSet::from([key]);
                        }
                    }
                }
                RankMin { k, det: best.expect("the cap admits a minor"), keys }
            };
            lo.push(to_min(found_lo));
            hi.push(to_min(found_hi));
        }
        (lo, hi)
    }

    #[allow(clippy::too_many_arguments)]
    fn tuples(
        &self,
        vecs: &[(Vec<i64>, i128)],
        k: usize,
        start: usize,
        prod: i128,
        scale: i128,
        lim: i128,
        idx: &mut Vec<usize>,
        leaf: &mut dyn FnMut(&[usize], i128),
    ) {
        if idx.len() == k {
            leaf(idx, prod);
            return;
        }
        let left = (k - idx.len()) as u32;
        for i in start..vecs.len() {
            let nn = vecs[i].1;
            if prod.saturating_mul(nn.saturating_pow(left)).saturating_mul(scale) > lim {
                break;
            }
            idx.push(i);
            self.tuples(vecs, k, i + 1, prod * nn, scale, lim, idx, leaf);
            idx.pop();
        }
    }
}

/// `j` is a vertex of the lower hull of `(k, ln d_k)` iff it lies strictly
/// below every chord over it.
pub fn hull_filtration(mins: &[RankMin]) -> OracleFiltration {
    let n = mins.len() - 1;
    let d: Vec<&Q> = mins.iter().map(|m| &m.det).collect();
    let pw = |x: &Q, e: usize| num_traits::pow(x.clone(), e);
    let mut ranks = vec![0];
    for j in 1..n {
        let below = (0..j).all(|i| (j + 1..=n).all(|l| pw(d[j], l - i) < pw(d[i], l - j) * pw(d[l], j - i)));
        if below {
            ranks.push(j);
        }
    }
    ranks.push(n);
    let dets = ranks.iter().map(|&k| d[k].clone()).collect();
    let keys = ranks
        .iter()
        .skip(1)
        .map(|&k| {
            assert_eq!(mins[k].keys.len(), 1, "hull vertex at rank {k} has several minimizers");
            mins[k].keys.iter().next().unwrap().clone()
        })
        .collect();
    OracleFiltration { ranks, dets, keys }
}

/// Semistable iff `d_k^n >= det^k` for every `k`.
pub fn oracle_semistable(l: &GramLattice) -> bool {
    let (mins, _) = Oracle::new(l).rankin(1);
    let n = l.rank();
    let det = &mins[n].det;
    (1..n).all(|k| num_traits::pow(mins[k].det.clone(), n) >= num_traits::pow(det.clone(), k))
}

pub fn gram_det_of(l: &GramLattice, b: &IntMatrix) -> Q {
    let g = l.gram();
    let n = l.rank();
    let rows: Vec<Vec<Q>> = b.row_iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|x| {
            rows.iter()
                .map(|y| {
                    let mut s = Q::zero();
                    for i in 0..n {
                        for j in 0..n {
                            s += &x[i] * &g[(i, j)] * &y[j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    rat_det(&m)
}

pub static FILTRATIONS_RECHECKED: AtomicUsize = AtomicUsize::new(0);

/// Independent re-check of a returned filtration: nested steps, quotient
/// heights from step determinants strictly increasing in reduced form,
/// and semistable quotients (brute force up to rank 4).
pub fn recheck_filtration(f: &Filtration) -> Result<(), String> {
    let l = f.lattice();
    let mut prev_rank = 0usize;
    let mut prev_det = Q::one();
    let mut prev_q: Option<(Q, usize)> = None;
    let mut prev_step: Option<&Sublattice> = None;
    for (i, s) in f.steps.iter().enumerate() {
        let r = s.rank();
        if r <= prev_rank {
            return Err(format!("step {} does not grow", i + 1));
        }
        if let Some(p) = prev_step {
            if !s.contains(p) {
                return Err(format!("step {} does not contain step {i}", i + 1));
            }
        }
        let det = gram_det_of(l, s.basis());
        let qh = &det / &prev_det;
        let qr = r - prev_rank;
        if ExactCheck::from_rat(&qh) != ExactCheck::from_epr(&f.quotient_heights[i].value) || f.quotient_heights[i].rank != qr {
            return Err(format!("quotient height {} disagrees with step determinants", i + 1));
        }
        if let Some((pq, pr)) = &prev_q {
            // pq^(1/pr) < qh^(1/qr)
            if num_traits::pow(pq.clone(), qr) >= num_traits::pow(qh.clone(), *pr) {
                return Err(format!("reduced quotient heights not increasing at {}", i + 1));
            }
        }
        let quot = subquotient(prev_step, s).map_err(|e| e.to_string())?;
        if rat_det(&quot.gram().to_rows()) != qh {
            return Err(format!("quotient {} has the wrong determinant", i + 1));
        }
        let ok = if quot.rank() <= 4 {
            oracle_semistable(&quot)
        } else {
            validate_filtration(&Filtration::trivial(&quot), &SearchConfig::default()).map_err(|e| e.to_string())?.passed()
        };
        if !ok {
            return Err(format!("quotient {} is not semistable", i + 1));
        }
        prev_rank = r;
        prev_det = det;
        prev_q = Some((qh, qr));
        prev_step = Some(s);
    }
    if prev_rank != l.rank() {
        return Err("last step is not the whole lattice".into());
    }
    FILTRATIONS_RECHECKED.fetch_add(1, Ordering::Relaxed);
    Ok(())
}

/// Rational quotient heights compared as rationals; the library stores
/// them as exact positive reals.
#[derive(PartialEq, Debug)]
pub struct ExactCheck(Q);

impl ExactCheck {
    pub fn from_rat(x: &Q) -> Self {
        ExactCheck(x.clone())
    }
    pub fn from_epr(x: &slopeforge::exact::ExactPosReal) -> Self {
        ExactCheck(x.to_rat().expect("determinant ratios are rational"))
    }
}

/// Automorphism count by trying every tuple of vectors with the right
/// norms and inner products.
pub fn brute_force_aut_order(l: &GramLattice) -> u64 {
    let o = Oracle::new(l);
    let n = o.n;
    let maxd = (0..n).map(|i| o.g[i][i]).max().unwrap();
    let vs = o.vectors(maxd, true);
    let cands: Vec<Vec<&Vec<i64>>> =
        (0..n).map(|j| vs.iter().filter(|(_, nn)| *nn == o.g[j][j]).map(|(v, _)| v).collect()).collect();
    fn go(o: &Oracle, cands: &[Vec<&Vec<i64>>], chosen: &mut Vec<Vec<i64>>, count: &mut u64) {
        let j = chosen.len();
        if j == o.n {
            let rows: Vec<Vec<i128>> = chosen.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            if int_det(&rows).abs() == 1 {
                *count += 1;
            }
            return;
        }
        for v in &cands[j] {
            if (0..j).all(|i| o.dot(&chosen[i], v) == o.g[i][j]) {
                chosen.push((*v).clone());
                go(o, cands, chosen, count);
                chosen.pop();
            }
        }
    }
    let mut count = 0;
    go(&o, &cands, &mut Vec::new(), &mut count);
    count
}

fn invert_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.clone()).collect();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(p, c);
        inv.swap(p, c);
        let d = a[c][c];
        for k in 0..n {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for k in 0..n {
                    a[r][k] -= f * a[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
        }
    }
    inv
}

/// 200-digit evaluation of `ln x` for a positive rational.
pub mod hp {
    use astro_float::{BigFloat, Consts, RoundingMode};
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    pub const BITS: usize = 704; // > 200 decimal digits
    const RM: RoundingMode = RoundingMode::ToEven;

    pub struct Ctx(Consts);

    impl Ctx {
        pub fn new() -> Self {
            Ctx(Consts::new().expect("constants"))
        }

        fn int(&mut self, x: &BigInt) -> BigFloat {
            BigFloat::from_u128(x.to_u128().expect("fits in 128 bits"), BITS)
        }

        pub fn ln_ratio(&mut self, num: &BigInt, den: &BigInt) -> BigFloat {
            let a = self.int(num).ln(BITS, RM, &mut self.0);
            let b = self.int(den).ln(BITS, RM, &mut self.0);
            a.sub(&b, BITS, RM)
        }

        /// `sum e_i ln p_i` with rational exponents `e_i = n_i / d_i`.
        pub fn log_of(&mut self, factors: &[(u64, i64, i64)]) -> BigFloat {
            let mut acc = BigFloat::from_u64(0, BITS);
            for &(p, n, d) in factors {
                let lp = BigFloat::from_u64(p, BITS).ln(BITS, RM, &mut self.0);
                let e = BigFloat::from_i64(n, BITS).div(&BigFloat::from_i64(d, BITS), BITS, RM);
                acc = acc.add(&lp.mul(&e, BITS, RM), BITS, RM);
            }
            acc
        }
    }

    impl Default for Ctx {
        fn default() -> Self {
            Self::new()
        }
    }

    /// `Some(ordering)` when the values differ by more than `2^-600`,
    /// `None` for a numerical tie.
    pub fn cmp(a: &BigFloat, b: &BigFloat) -> Option<std::cmp::Ordering> {
        let d = a.sub(b, BITS, RM);
        let two = BigFloat::from_u64(2, BITS);
        let eps = BigFloat::from_u64(1, BITS).div(&two.powi(600, BITS, RM), BITS, RM);
        if d.abs() <= eps {
            return None;
        }
        d.partial_cmp(&BigFloat::from_u64(0, BITS))
    }
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
