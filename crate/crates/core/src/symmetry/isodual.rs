//! Similarities `L -> L^dual` and the pairings they induce.
//!
//! A similarity is an integer matrix `U` with `U^T G^{-1} U = c G`; column
//! `j` holds the dual coordinates of the image of `b_j`. The pairing
//! `b(x, y) = sigma(x)(y)` then has matrix `S = U^T`, and the map
//! `tau = H^{-1} sigma` (with `H : x -> <x, .>`) has matrix `T = G^{-1} U`.
//!
//! For `diag(1, 4)`: `c = 1/4`; `U = [[0, 1], [1, 0]]` gives the symmetric
//! `S = [[0, 1], [1, 0]]` and `T = [[0, 1], [1/4, 0]]` with `T^2 = I/4`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::isometry::{automorphisms, isometries, AutGroup, IsometryOptions, DEFAULT_ISOMETRY_BUDGET};
use crate::error::{Error, Result};
use crate::exact::hnf::integer_kernel;
use crate::exact::{signature_exact, ExactPosReal, Inertia, IntMatrix, Rat, RatMatrix};
use crate::lattice::{GramLattice, Sublattice};
use crate::rankin::{h_min, subquotient, Filtration, SearchConfig};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingType {
    Orthogonal,
    Symplectic,
    NeitherOnly,
}

impl std::fmt::Display for PairingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairingType::Orthogonal => "orthogonal",
            PairingType::Symplectic => "symplectic",
            PairingType::NeitherOnly => "neither-only",
        })
    }
}

/// One similarity with its pairing matrix.
#[derive(Clone, Debug)]
pub struct Similarity {
    pub u: IntMatrix,
    pub pairing: RatMatrix,
}

impl Similarity {
    pub fn new(u: IntMatrix) -> Self {
        let pairing = u.transpose().to_rat();
        Similarity { u, pairing }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairing.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairing.is_antisymmetric()
    }

    pub fn kind(&self) -> Option<PairingType> {
        if self.is_symmetric() {
            Some(PairingType::Orthogonal)
        } else if self.is_antisymmetric() {
            Some(PairingType::Symplectic)
        } else {
            None
        }
    }

    /// Inertia of a symmetric pairing.
    pub fn inertia(&self) -> Option<Inertia> {
        self.is_symmetric().then(|| signature_exact(&self.pairing).expect("symmetric"))
    }

    /// `T = G^{-1} U`.
    pub fn tau(&self, l: &GramLattice) -> RatMatrix {
        l.gram().inverse().expect("definite").mul(&self.u.to_rat())
    }

    /// `b(x, y)` for coordinate rows `x`, `y`.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Rat {
        let mut s = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += &self.pairing[(i, j)] * Rat::from_integer(xi * yj);
            }
        }
        s
    }

    /// Image of a sublattice in the dual lattice: rows `B * U^T`.
    pub fn image(&self, f: &Sublattice) -> Result<Sublattice> {
        let dual = f.ambient().dual();
        f.map_rows(&dual, &self.u.transpose())
    }
}

/// The ratio `c = det^{-2/n}` when rational.
pub fn isoduality_ratio(l: &GramLattice) -> Option<Rat> {
    let n = l.rank() as i64;
    ExactPosReal::from_rat(l.det()).ok()?.pow(&Rat::new((-2).into(), n.into())).to_rat()
}

pub fn is_similarity(l: &GramLattice, u: &IntMatrix, c: &Rat) -> bool {
    if u.rows() != l.rank() || u.cols() != l.rank() {
        return false;
    }
    let uq = u.to_rat();
    let inv = l.gram().inverse().expect("definite");
    uq.transpose().mul(&inv).mul(&uq) == l.gram().scaled(c)
}

/// One similarity `L -> L^dual`, if any exists. `Err(Budget)` when the
/// search ran out before deciding.
pub fn find_similarity(l: &GramLattice, budget_nodes: u64) -> Result<Option<IntMatrix>> {
    let Some(c) = isoduality_ratio(l) else { return Ok(None) };
    let n = l.rank();
    if l.is_unimodular() {
        return Ok(Some(l.gram().map(|x| x.to_integer())));
    }
    if n == 2 {
        let j = IntMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
        debug_assert!(is_similarity(l, &j, &c));
        return Ok(Some(j));
    }
    let src = l.scale(&c)?;
    let opts = IsometryOptions { first_only: true, budget_nodes, ..Default::default() };
    let list = isometries(&src, &l.dual(), &opts)?;
    match list.maps.into_iter().next() {
        Some(u) => Ok(Some(u)),
        None if list.complete => Ok(None),
        None => Err(Error::Budget { nodes: budget_nodes }),
    }
}

#[derive(Clone, Debug)]
pub struct IsodualOptions {
    pub budget_nodes: u64,
    /// Automorphisms swept at most; beyond it the type set may be partial.
    pub sweep_cap: usize,
}

impl Default for IsodualOptions {
    fn default() -> Self {
        IsodualOptions { budget_nodes: DEFAULT_ISOMETRY_BUDGET, sweep_cap: 2048 }
    }
}

#[derive(Clone, Debug)]
pub struct IsodualityWitness {
    pub lattice: GramLattice,
    pub ratio: Rat,
    /// Chosen witness: an orthogonal one of largest `|s|` when available.
    pub map_u: IntMatrix,
    pub pairing_s: RatMatrix,
    pub types_realizable: BTreeSet<PairingType>,
    pub signature: Option<i64>,
    pub witt_index: Option<usize>,
    pub orthogonal: Option<Similarity>,
    pub symplectic: Option<Similarity>,
    pub orthogonal_signatures: BTreeSet<i64>,
    /// Every similarity looked at, seed first.
    pub examined: Vec<Similarity>,
    /// The whole coset `sigma * Aut(L)` was swept.
    pub types_complete: bool,
}

impl IsodualityWitness {
    pub fn primary(&self) -> Similarity {
        Similarity { u: self.map_u.clone(), pairing: self.pairing_s.clone() }
    }

    pub fn n(&self) -> usize {
        self.lattice.rank()
    }

    pub fn max_abs_signature(&self) -> Option<i64> {
        self.orthogonal_signatures.iter().map(|s| s.abs()).max()
    }
}

pub fn isoduality_witness(l: &GramLattice, opts: &IsodualOptions) -> Result<Option<IsodualityWitness>> {
    let Some(seed) = find_similarity(l, opts.budget_nodes)? else { return Ok(None) };
    let aut = automorphisms(l, opts.budget_nodes)?;
    witness_from_seed(l, seed, &aut, opts.sweep_cap).map(Some)
}

/// Sweep `U * g` over `g` in `Aut(L)` starting from a known similarity.
pub fn witness_from_seed(l: &GramLattice, seed: IntMatrix, aut: &AutGroup, sweep_cap: usize) -> Result<IsodualityWitness> {
    let c = isoduality_ratio(l).ok_or_else(|| Error::NotApplicable("isoduality ratio is irrational".into()))?;
    if !is_similarity(l, &seed, &c) {
        return Err(Error::Invariant("seed is not a similarity onto the dual".into()));
    }
    let (els, complete) = aut.some_elements(sweep_cap);
    let id = IntMatrix::identity(l.rank());
    let mut examined = vec![Similarity::new(seed.clone())];
    for g in els.iter().filter(|g| **g != id) {
        examined.push(Similarity::new(seed.mul(g)));
    }
    Ok(summarize(l, c, examined, complete))
}

/// Witness built from the given similarities only (no sweep).
pub fn witness_from_maps(l: &GramLattice, maps: Vec<IntMatrix>) -> Result<IsodualityWitness> {
    let c = isoduality_ratio(l).ok_or_else(|| Error::NotApplicable("isoduality ratio is irrational".into()))?;
    if maps.is_empty() {
        return Err(Error::Dimension("no similarities given".into()));
    }
    for u in &maps {
        if !is_similarity(l, u, &c) {
            return Err(Error::Invariant("given map is not a similarity onto the dual".into()));
        }
    }
    Ok(summarize(l, c, maps.into_iter().map(Similarity::new).collect(), false))
}

fn summarize(l: &GramLattice, c: Rat, examined: Vec<Similarity>, complete: bool) -> IsodualityWitness {
    let mut types = BTreeSet::new();
    let mut sigs = BTreeSet::new();
    let mut orthogonal: Option<(i64, Similarity)> = None;
    let mut symplectic = None;
    for s in &examined {
        match s.kind() {
            Some(PairingType::Orthogonal) => {
                types.insert(PairingType::Orthogonal);
                let sig = s.inertia().expect("symmetric").signature();
                sigs.insert(sig);
                let better = orthogonal.as_ref().map_or(true, |(best, b)| {
                    (sig.abs(), sig, s.u.as_slice()) > (best.abs(), *best, b.u.as_slice())
                });
                if better {
                    orthogonal = Some((sig, s.clone()));
                }
            }
            Some(PairingType::Symplectic) => {
                types.insert(PairingType::Symplectic);
                if symplectic.as_ref().map_or(true, |b: &Similarity| s.u.as_slice() > b.u.as_slice()) {
                    symplectic = Some(s.clone());
                }
            }
            _ => {}
        }
    }
    if types.is_empty() {
        types.insert(PairingType::NeitherOnly);
    }
    let orthogonal = orthogonal.map(|(_, s)| s);
    let primary = orthogonal.clone().or_else(|| symplectic.clone()).unwrap_or_else(|| examined[0].clone());
    let inertia = orthogonal.as_ref().and_then(|s| s.inertia());
    IsodualityWitness {
        lattice: l.clone(),
        ratio: c,
        map_u: primary.u,
        pairing_s: primary.pairing,
        types_realizable: types,
        signature: inertia.map(|i| i.signature()),
        witt_index: inertia.map(|i| i.witt_index()),
        orthogonal,
        symplectic,
        orthogonal_signatures: sigs,
        examined,
        types_complete: complete,
    }
}

/// `S` symmetric iff `T^2 = c I`, antisymmetric iff `T^2 = -c I`, for every
/// examined similarity.
pub fn verify_tau_square_law(w: &IsodualityWitness) -> CheckReport {
    let l = &w.lattice;
    let n = l.rank();
    let ci = RatMatrix::identity(n).scaled(&w.ratio);
    let neg = ci.neg();
    let mut r = CheckReport::new(format!("tau square law on {}", l.name()));
    let (mut sym, mut anti, mut bad) = (0usize, 0usize, 0usize);
    for s in &w.examined {
        let t = s.tau(l);
        let t2 = t.mul(&t);
        let ok = (s.is_symmetric() == (t2 == ci)) && (s.is_antisymmetric() == (t2 == neg));
        sym += s.is_symmetric() as usize;
        anti += s.is_antisymmetric() as usize;
        bad += !ok as usize;
    }
    r.push(
        "equivalence",
        bad == 0,
        format!("{} witnesses, {sym} orthogonal, {anti} symplectic, {bad} violations", w.examined.len()),
    );
    for ty in &w.types_realizable {
        let (name, found, want) = match ty {
            PairingType::Orthogonal => ("orthogonal", w.orthogonal.as_ref(), &ci),
            PairingType::Symplectic => ("symplectic", w.symplectic.as_ref(), &neg),
            PairingType::NeitherOnly => continue,
        };
        let ok = found.is_some_and(|s| {
            let t = s.tau(l);
            t.mul(&t) == *want
        });
        r.push(format!("{name} tau^2"), ok, format!("alpha = {}", w.ratio));
    }
    r
}

/// Whether `b` vanishes on a sublattice.
pub fn is_totally_isotropic(s: &Similarity, f: &Sublattice) -> bool {
    let b = f.basis().to_rat();
    b.mul(&s.pairing).mul(&b.transpose()).is_zero()
}

/// `{y : b(x, y) = 0 for all x in F}` as a saturated sublattice (`None` if zero).
pub fn right_orthogonal(s: &Similarity, f: &Sublattice) -> Option<Sublattice> {
    let m = f.basis().to_rat().mul(&s.pairing);
    let den = m.denominator_lcm();
    let mi = m.map(|x| (x * Rat::from_integer(den.clone())).to_integer());
    let k = integer_kernel(&mi);
    (k.rows() > 0).then(|| Sublattice::from_basis(f.ambient(), k))
}

/// Executable checks of how an isodual structure interacts with the slope
/// filtration `0 = E_0 < ... < E_l = L`.
pub fn verify_isodual_filtration(
    w: &IsodualityWitness,
    f: &Filtration,
    budget_nodes: u64,
) -> Result<CheckReport> {
    let l = &w.lattice;
    let n = l.rank();
    let len = f.len();
    let sim = w.primary();
    let mut r = CheckReport::new(format!("isodual filtration of {} (length {len})", l.name()));
    let step = |i: usize| -> Option<&Sublattice> { (i > 0).then(|| &f.steps[i - 1]) };

    // sigma E_i = E_{l-i}^perp
    for i in 1..len {
        let img = sim.image(step(i).expect("i > 0"))?;
        let perp = step(len - i).expect("0 < l - i").perp()?;
        r.push(format!("sigma E_{i} = E_{}^perp", len - i), img == perp, "");
    }
    for i in 1..len {
        let e = step(i).expect("i > 0");
        if 2 * i <= len {
            r.push(format!("E_{i} totally isotropic"), is_totally_isotropic(&sim, e), format!("rank {}", e.rank()));
        }
        if 2 * i >= len {
            let ok = right_orthogonal(&sim, e).map_or(true, |o| e.contains(&o));
            r.push(format!("E_{i} co-isotropic"), ok, "");
        }
    }
    if len > 1 {
        let e1 = step(1).expect("len > 1");
        r.push("dim E_1 <= n/2", 2 * e1.rank() <= n, format!("{} <= {n}/2", e1.rank()));
    }
    for i in 1..len {
        if 2 * i >= len {
            break;
        }
        let q = subquotient(step(i), step(len - i).expect("l - i > i"))?;
        let ok = find_similarity(&q, budget_nodes)?.is_some();
        r.push(format!("E_{}/E_{i} isodual", len - i), ok, format!("rank {}", q.rank()));
    }
    for j in 1..=len / 2 {
        for i in 0..j {
            let a = subquotient(step(i), step(j).expect("j > 0"))?;
            let b = subquotient(step(len - j), step(len - i).expect("l - i > 0"))?;
            let p = a.direct_product(&b);
            let ok = find_similarity(&p, budget_nodes)?.is_some();
            r.push(
                format!("E_{j}/E_{i} x E_{}/E_{} isodual", len - i, len - j),
                ok,
                format!("rank {}", p.rank()),
            );
        }
    }
    Ok(r)
}

/// Destabilizer dimension bound from an orthogonal similarity.
#[derive(Clone, Debug, Serialize)]
pub struct Th1Certificate {
    pub rank: usize,
    pub signature: i64,
    /// `(n - max |s|) / 2`.
    pub bound: usize,
    /// Definite pairing: semistable, nothing enumerated.
    pub semistable: bool,
}

pub fn th1_certificate(w: &IsodualityWitness) -> Result<Th1Certificate> {
    let s = w
        .orthogonal_signatures
        .iter()
        .copied()
        .max_by_key(|s| s.abs())
        .ok_or_else(|| Error::NotApplicable("no orthogonal similarity".into()))?;
    let n = w.n();
    Ok(Th1Certificate { rank: n, signature: s, bound: (n - s.unsigned_abs() as usize) / 2, semistable: s.unsigned_abs() as usize == n })
}

/// Certificate for unimodular lattices, where `U = G` is a definite witness.
pub fn unimodular_certificate(l: &GramLattice) -> Option<Th1Certificate> {
    l.is_unimodular().then(|| {
        let n = l.rank();
        Th1Certificate { rank: n, signature: n as i64, bound: 0, semistable: true }
    })
}

/// Compare a certificate with the enumerated destabilizer.
pub fn cross_validate_th1(l: &GramLattice, cert: &Th1Certificate, cfg: &SearchConfig) -> Result<CheckReport> {
    let flag = h_min(l, cfg)?;
    let d = flag.destabilizer.rank();
    let mut r = CheckReport::new(format!("destabilizer bound on {}", l.name()));
    if cert.semistable {
        r.push("definite implies semistable", flag.destabilizer.is_full(), format!("destabilizer rank {d}"));
    } else {
        let ok = flag.destabilizer.is_full() || d <= cert.bound;
        r.push("dim E_1 <= (n - |s|)/2", ok, format!("{d} <= {}", cert.bound));
    }
    Ok(r)
}

/// The slope filtration, skipping enumeration when a certificate applies.
pub fn filtration_with_certificate(l: &GramLattice, cfg: &SearchConfig) -> Result<Filtration> {
    if unimodular_certificate(l).is_some() {
        return Ok(Filtration::trivial(l));
    }
    crate::rankin::gs_filtration(l, cfg)
}

/// Every automorphism generator maps every filtration step onto itself.
pub fn verify_aut_invariance(aut: &AutGroup, f: &Filtration) -> Result<CheckReport> {
    let l = &aut.lattice;
    let mut r = CheckReport::new(format!("Aut-invariance on {} (order {})", l.name(), aut.order));
    for (i, e) in f.steps.iter().enumerate() {
        let mut ok = true;
        for g in &aut.generators {
            let img = e.map_rows(l, &g.transpose())?;
            ok &= img == *e;
        }
        r.push(format!("g E_{} = E_{}", i + 1, i + 1), ok, format!("{} generators", aut.generators.len()));
    }
    Ok(r)
}

/// User-supplied claim about a decomposition of `L (x) Q`.
#[derive(Clone, Debug, Default)]
pub struct DecompositionClaim {
    pub components: usize,
    pub pairwise_non_isomorphic: bool,
    pub absolutely_irreducible: bool,
}

/// When the claim holds, `L` must be semistable; enumeration disagreeing
/// is reported as a contradiction.
pub fn check_decomposition_claim(l: &GramLattice, claim: &DecompositionClaim, cfg: &SearchConfig) -> Result<CheckReport> {
    let subject = format!("decomposition claim on {}", l.name());
    if !(claim.pairwise_non_isomorphic && claim.absolutely_irreducible) {
        return Ok(CheckReport::not_applicable(subject, "components not claimed pairwise non-isomorphic and absolutely irreducible"));
    }
    let flag = h_min(l, cfg)?;
    let mut r = CheckReport::new(subject);
    r.push(
        "asserted semistable, enumeration agrees",
        flag.destabilizer.is_full(),
        format!("{} components; destabilizer rank {}", claim.components, flag.destabilizer.rank()),
    );
    Ok(r)
}

/// `E x E^dual` with its swap witnesses `[[0, I], [I, 0]]` (orthogonal)
/// and `[[0, -I], [I, 0]]` (symplectic), both checked.
pub fn double_dual_witnesses(e: &GramLattice) -> Result<(GramLattice, IsodualityWitness)> {
    let p = e.direct_product(&e.dual()).with_label(format!("{}xdual", e.name()));
    let k = e.rank();
    let n = 2 * k;
    let mut orth = IntMatrix::zeros(n, n);
    let mut symp = IntMatrix::zeros(n, n);
    for i in 0..k {
        orth[(i, k + i)] = BigInt::one();
        orth[(k + i, i)] = BigInt::one();
        symp[(i, k + i)] = -BigInt::one();
        symp[(k + i, i)] = BigInt::one();
    }
    let w = witness_from_maps(&p, vec![orth, symp])?;
    if !w.types_realizable.contains(&PairingType::Orthogonal) || !w.types_realizable.contains(&PairingType::Symplectic) {
        return Err(Error::Invariant("swap witnesses lost their type".into()));
    }
    Ok((p, w))
}
