//! Integer factorization: trial division, then Pollard-Brent rho.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ATTEMPTS: u64 = 64;
const RHO_ITERATIONS: u64 = 1 << 20;

const WITNESSES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Prime factorization of `n > 0` as prime -> multiplicity.
pub fn factorize(n: &BigUint) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        if let Some(small) = rest.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
            if small % p == 0 {
                let mut e = 0;
                let mut s = small;
                while s % p == 0 {
                    s /= p;
                    e += 1;
                }
                out.insert(BigUint::from(p), e);
                rest = BigUint::from(s);
            }
        } else {
            let bp = BigUint::from(p);
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.insert(bp, e);
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if !rest.is_one() {
        if p <= TRIAL_LIMIT {
            // Trial division ran past the square root: what is left is prime.
            *out.entry(rest).or_insert(0) += 1;
        } else {
            split_large(rest, &mut out)?;
        }
    }
    Ok(out)
}

fn split_large(n: BigUint, out: &mut BTreeMap<BigUint, u32>) -> Result<()> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_brent(&m).ok_or_else(|| Error::Unfactored(m.clone()))?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(())
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &w in &WITNESSES {
        let bw = BigUint::from(w);
        if *n == bw {
            return true;
        }
        if (n % &bw).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &w in &WITNESSES {
        let mut x = BigUint::from(w).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1..=RHO_ATTEMPTS {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        let mut iters = 0u64;
        while g.is_one() && iters < RHO_ITERATIONS {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            iters += r;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}
