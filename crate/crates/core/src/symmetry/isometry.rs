//! Isometry search between Gram lattices and automorphism groups.
//!
//! Source basis vectors (of an LLL-reduced basis) are sent one at a time to
//! target vectors of the right norm. After each choice, the candidate lists
//! of all later basis vectors are filtered by the inner products with the
//! new image, and a branch dies as soon as one list empties.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::lll::lll_gram;
use crate::exact::{IntMatrix, Rat};
use crate::lattice::GramLattice;
use crate::rankin::{short_vectors, IntForm};

pub const DEFAULT_ISOMETRY_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct IsometryOptions {
    pub first_only: bool,
    pub budget_nodes: u64,
    /// Stop after this many maps (the list is then incomplete).
    pub max_maps: usize,
}

impl Default for IsometryOptions {
    fn default() -> Self {
        IsometryOptions { first_only: false, budget_nodes: DEFAULT_ISOMETRY_BUDGET, max_maps: 1_000_000 }
    }
}

/// Integer `U` with `U^T * target.gram * U = source.gram`: column `j` is the
/// image of the `j`-th source basis vector in target coordinates.
#[derive(Clone, Debug)]
pub struct IsometryList {
    pub source: GramLattice,
    pub target: GramLattice,
    pub maps: Vec<IntMatrix>,
    pub complete: bool,
}

impl IsometryList {
    pub fn is_isometric(&self) -> Option<bool> {
        if !self.maps.is_empty() {
            Some(true)
        } else if self.complete {
            Some(false)
        } else {
            None
        }
    }
}

struct Engine {
    n: usize,
    vecs: Vec<Vec<i64>>,
    gx: Vec<Vec<i128>>,
    a: Vec<Vec<i128>>,
    level_cands: Vec<Vec<u32>>,
    index: HashMap<Vec<i64>, u32>,
    /// Rows: reduced source basis in source coordinates.
    t: IntMatrix,
    t_inv_t: IntMatrix,
    nodes: u64,
    budget: u64,
}

enum Setup {
    Ready(Box<Engine>),
    /// A necessary condition already fails.
    Impossible,
}

impl Engine {
    fn new(source: &GramLattice, target: &GramLattice, budget: u64) -> Result<Setup> {
        let n = source.rank();
        if n != target.rank() || source.det() != target.det() {
            return Ok(Setup::Impossible);
        }
        let red = lll_gram(source.gram());
        let form = IntForm::new(target.gram())?;
        let den = Rat::from_integer(BigInt::from(form.den));
        let mut a = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = &red.gram[(i, j)] * &den;
                if !v.is_integer() {
                    return Ok(Setup::Impossible);
                }
                a[i][j] = v.to_integer().to_i128().ok_or(Error::Overflow("source Gram"))?;
            }
        }
        let mut bound = red.gram[(0, 0)].clone();
        for i in 1..n {
            if red.gram[(i, i)] > bound {
                bound = red.gram[(i, i)].clone();
            }
        }
        let tv = short_vectors(target, &bound)?;
        let sv = short_vectors(source, &bound)?;
        let norms = |v: &[crate::rankin::ShortVector]| {
            let mut m: Vec<Rat> = v.iter().map(|s| s.norm.clone()).collect();
            m.sort();
            m
        };
        if norms(&tv) != norms(&sv) {
            return Ok(Setup::Impossible);
        }
        let mut vecs = Vec::with_capacity(2 * tv.len());
        for v in &tv {
            vecs.push(v.coords.clone());
            vecs.push(v.coords.iter().map(|c| -c).collect());
        }
        let gx: Vec<Vec<i128>> = vecs
            .iter()
            .map(|v| (0..n).map(|i| (0..n).map(|j| form.g[i][j] * v[j] as i128).sum()).collect())
            .collect();
        let norm_of = |k: usize| -> i128 { gx[k].iter().zip(&vecs[k]).map(|(g, x)| g * *x as i128).sum() };
        let level_cands = (0..n)
            .map(|i| (0..vecs.len()).filter(|&k| norm_of(k) == a[i][i]).map(|k| k as u32).collect())
            .collect();
        let index = vecs.iter().enumerate().map(|(k, v)| (v.clone(), k as u32)).collect();
        let t_inv_t = red.transform.unimodular_inverse()?.transpose();
        Ok(Setup::Ready(Box::new(Engine {
            n,
            vecs,
            gx,
            a,
            level_cands,
            index,
            t: red.transform,
            t_inv_t,
            nodes: 0,
            budget,
        })))
    }

    fn dot(&self, x: u32, y: u32) -> i128 {
        self.gx[x as usize]
            .iter()
            .zip(&self.vecs[y as usize])
            .map(|(g, v)| g * *v as i128)
            .sum()
    }

    /// Filter the lists of levels `level+1..` after choosing `x` at `level`.
    fn filter(&self, level: usize, x: u32, lists: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::with_capacity(lists.len() - 1);
        for (off, list) in lists[1..].iter().enumerate() {
            let l = level + 1 + off;
            let want = self.a[l][level];
            let f: Vec<u32> = list.iter().copied().filter(|&y| self.dot(x, y) == want).collect();
            if f.is_empty() {
                return None;
            }
            out.push(f);
        }
        Some(out)
    }

    /// Depth-first search below `level`; `sink` returns `true` to stop.
    fn bt(
        &mut self,
        level: usize,
        chosen: &mut Vec<u32>,
        lists: &[Vec<u32>],
        sink: &mut dyn FnMut(&Engine, &[u32]) -> bool,
    ) -> Result<bool> {
        if level == self.n {
            return Ok(sink(self, chosen));
        }
        for &x in &lists[0] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { nodes: self.budget });
            }
            let Some(next) = self.filter(level, x, lists) else { continue };
            chosen.push(x);
            let stop = self.bt(level + 1, chosen, &next, sink)?;
            chosen.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Run the search with the images of the first basis vectors forced.
    fn run(&mut self, prefix: &[u32], sink: &mut dyn FnMut(&Engine, &[u32]) -> bool) -> Result<bool> {
        let mut lists = self.level_cands.clone();
        let mut chosen = Vec::new();
        for (level, &x) in prefix.iter().enumerate() {
            if !lists[0].contains(&x) {
                return Ok(false);
            }
            match self.filter(level, x, &lists) {
                Some(next) => lists = next,
                None => return Ok(false),
            }
            chosen.push(x);
        }
        self.bt(prefix.len(), &mut chosen, &lists, sink)
    }

    /// The map in source coordinates: `U = U' * (T^{-1})^T`.
    fn to_map(&self, chosen: &[u32]) -> IntMatrix {
        let n = self.n;
        let mut up = IntMatrix::zeros(n, n);
        for (j, &x) in chosen.iter().enumerate() {
            for i in 0..n {
                up[(i, j)] = BigInt::from(self.vecs[x as usize][i]);
            }
        }
        up.mul(&self.t_inv_t)
    }
}

fn verify_map(source: &GramLattice, target: &GramLattice, u: &IntMatrix) -> bool {
    let uq = u.to_rat();
    uq.transpose().mul(target.gram()).mul(&uq) == *source.gram()
}

pub fn isometries(source: &GramLattice, target: &GramLattice, opts: &IsometryOptions) -> Result<IsometryList> {
    let mut out = IsometryList { source: source.clone(), target: target.clone(), maps: Vec::new(), complete: true };
    let mut eng = match Engine::new(source, target, opts.budget_nodes)? {
        Setup::Impossible => return Ok(out),
        Setup::Ready(e) => e,
    };
    let mut maps = Vec::new();
    let first_only = opts.first_only;
    let max = opts.max_maps.max(1);
    let mut hit_cap = false;
    let res = eng.run(&[], &mut |e, chosen| {
        maps.push(e.to_map(chosen));
        if maps.len() >= max && !first_only {
            hit_cap = true;
        }
        first_only || hit_cap
    });
    match res {
        Ok(_) => {}
        Err(Error::Budget { .. }) => out.complete = false,
        Err(e) => return Err(e),
    }
    if hit_cap {
        out.complete = false;
    }
    for u in &maps {
        if !verify_map(source, target, u) {
            return Err(Error::Invariant("isometry search produced a non-isometry".into()));
        }
    }
    maps.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    out.maps = maps;
    Ok(out)
}

/// Automorphism group by a stabilizer chain on the reduced basis.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub lattice: GramLattice,
    /// Matrices `U` with `U^T G U = G` (columns are images of basis vectors).
    pub generators: Vec<IntMatrix>,
    pub order: u128,
    /// `|G_i : G_{i+1}|` along the chain, last basis vector first.
    pub orbit_sizes: Vec<usize>,
    /// Closure under the generators was enumerated and matched `order`.
    pub closure_verified: bool,
}

pub const CLOSURE_CAP: u128 = 50_000;

pub fn automorphisms(l: &GramLattice, budget_nodes: u64) -> Result<AutGroup> {
    let mut eng = match Engine::new(l, l, budget_nodes)? {
        Setup::Ready(e) => e,
        Setup::Impossible => return Err(Error::Invariant("identity is not an automorphism".into())),
    };
    let n = l.rank();
    // images of the reduced basis under the identity
    let base: Vec<u32> = (0..n)
        .map(|i| {
            let row: Vec<i64> = eng.t.row(i).iter().map(|x| x.to_i64().expect("small")).collect();
            eng.index.get(&row).copied().ok_or(Error::Invariant("basis vector missing from candidates".into()))
        })
        .collect::<Result<_>>()?;
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut gens_big: Vec<IntMatrix> = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut order: u128 = 1;
    for i in (0..n).rev() {
        let prefix = &base[..i];
        let start = eng.vecs[base[i] as usize].clone();
        let mut orbit = orbit_of(&start, &gens, n);
        let mut dead: HashSet<Vec<i64>> = HashSet::new();
        let cands: Vec<u32> = {
            let mut lists = eng.level_cands.clone();
            let mut ok = true;
            for (lv, &x) in prefix.iter().enumerate() {
                match eng.filter(lv, x, &lists) {
                    Some(next) => lists = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok { lists[0].clone() } else { Vec::new() }
        };
        for x in cands {
            let xv = eng.vecs[x as usize].clone();
            if orbit.contains(&xv) || dead.contains(&xv) {
                continue;
            }
            let mut p = prefix.to_vec();
            p.push(x);
            let mut found: Option<IntMatrix> = None;
            eng.run(&p, &mut |e, chosen| {
                found = Some(e.to_map(chosen));
                true
            })?;
            match found {
                Some(g) => {
                    if !verify_map(l, l, &g) {
                        return Err(Error::Invariant("automorphism search produced a non-isometry".into()));
                    }
                    gens.push(g.as_slice().iter().map(|v| v.to_i64().expect("small")).collect());
                    gens_big.push(g);
                    orbit = orbit_of(&start, &gens, n);
                }
                None => {
                    dead.extend(orbit_of(&xv, &gens, n));
                }
            }
        }
        orbit_sizes.push(orbit.len());
        order = order.checked_mul(orbit.len() as u128).ok_or(Error::Overflow("group order"))?;
    }
    let mut g = AutGroup { lattice: l.clone(), generators: gens_big, order, orbit_sizes, closure_verified: false };
    if order <= CLOSURE_CAP {
        let els = g.elements(CLOSURE_CAP as usize).expect("order under cap");
        if els.len() as u128 != order {
            return Err(Error::Invariant(format!(
                "closure has {} elements, stabilizer chain says {order}",
                els.len()
            )));
        }
        g.closure_verified = true;
    }
    Ok(g)
}

fn apply(g: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n).map(|i| (0..n).map(|j| g[i * n + j] * v[j]).sum()).collect()
}

fn orbit_of(start: &[i64], gens: &[Vec<i64>], n: usize) -> HashSet<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(start.to_vec());
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let w = apply(g, &v, n);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

impl AutGroup {
    /// All group elements by closure, or `None` past `cap` elements.
    pub fn elements(&self, cap: usize) -> Option<Vec<IntMatrix>> {
        let n = self.lattice.rank();
        let gens: Vec<Vec<i64>> = self
            .generators
            .iter()
            .map(|g| g.as_slice().iter().map(|v| v.to_i64().expect("small")).collect())
            .collect();
        let id: Vec<i64> = (0..n * n).map(|k| (k / n == k % n) as i64).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let p = mat_mul(g, &m, n);
                if seen.insert(p.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    order.push(p.clone());
                    queue.push_back(p);
                }
            }
        }
        order.sort();
        Some(order.iter().map(|m| IntMatrix::from_i64(n, n, m)).collect())
    }

    /// Up to `cap` elements (breadth-first from the identity) and whether
    /// that is the whole group.
    pub fn some_elements(&self, cap: usize) -> (Vec<IntMatrix>, bool) {
        if self.order <= cap as u128 {
            if let Some(e) = self.elements(cap) {
                return (e, true);
            }
        }
        let n = self.lattice.rank();
        let gens: Vec<Vec<i64>> = self
            .generators
            .iter()
            .map(|g| g.as_slice().iter().map(|v| v.to_i64().expect("small")).collect())
            .collect();
        let id: Vec<i64> = (0..n * n).map(|k| (k / n == k % n) as i64).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        'outer: while let Some(m) = queue.pop_front() {
            for g in &gens {
                let p = mat_mul(g, &m, n);
                if seen.insert(p.clone()) {
                    out.push(p.clone());
                    if out.len() >= cap {
                        break 'outer;
                    }
                    queue.push_back(p);
                }
            }
        }
        (out.iter().map(|m| IntMatrix::from_i64(n, n, m)).collect(), false)
    }

    pub fn is_automorphism(&self, u: &IntMatrix) -> bool {
        verify_map(&self.lattice, &self.lattice, u)
    }
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// Whether `u` is an integer matrix with determinant `±1`.
pub fn is_unimodular(u: &IntMatrix) -> bool {
    u.is_square() && {
        let d = u.det();
        !d.is_zero() && d.abs() == BigInt::from(1)
    }
}


#[cfg(test)]
mod big_groups {
    use super::*;

    fn cartan(n: usize, edges: &[(usize, usize)]) -> GramLattice {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 2;
        }
        for &(a, b) in edges {
            rows[a][b] = -1;
            rows[b][a] = -1;
        }
        GramLattice::from_int_rows(&rows).unwrap()
    }

    #[test]
    fn root_lattices() {
        let d4 = cartan(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(automorphisms(&d4, DEFAULT_ISOMETRY_BUDGET).unwrap().order, 1152);
        let a3 = cartan(3, &[(0, 1), (1, 2)]);
        assert_eq!(automorphisms(&a3, DEFAULT_ISOMETRY_BUDGET).unwrap().order, 48);
        let e8 = cartan(8, &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]);
        let g = automorphisms(&e8, DEFAULT_ISOMETRY_BUDGET).unwrap();
        assert_eq!(g.order, 696_729_600);
        assert!(!g.closure_verified);
        let z8 = GramLattice::standard(8);
        assert_eq!(automorphisms(&z8, DEFAULT_ISOMETRY_BUDGET).unwrap().order, 10_321_920);
    }
}
