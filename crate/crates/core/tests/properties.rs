//! Randomized invariants across the exact core, lattices, filtrations,
//! symmetry and tensor checks.

mod common;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::*;
use slopeforge::bost::{check_multiplicativity, BostConfig};
use slopeforge::exact::hnf::saturation_index;
use slopeforge::exact::{det_exact, saturate, signature_exact, ExactPosReal, IntMatrix, RatMatrix};
use slopeforge::io::{catalog, emit_lattice, parse_lattice, polygon_svg, CATALOG_NAMES};
use slopeforge::lattice::{GramLattice, Sublattice};
use slopeforge::rankin::{gs_filtration, h_min, SearchConfig};
use slopeforge::symmetry::{
    automorphisms, check_decomposition_claim, isometries, isoduality_witness, witness_from_seed, DecompositionClaim,
    IsometryOptions, PairingType, Similarity, DEFAULT_ISOMETRY_BUDGET,
};

fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
}

fn symmetric(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    square(max).prop_map(|m| {
        let n = m.len();
        (0..n).map(|i| (0..n).map(|j| if i <= j { m[i][j] } else { m[j][i] }).collect()).collect()
    })
}

/// Product of elementary integer matrices.
fn unimodular(n: usize, ops: &[(usize, usize, i64)], swap: bool) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            let mut e = IntMatrix::identity(n);
            e[(a, b)] = BigInt::from(k);
            u = u.mul(&e);
        }
    }
    if swap && n > 1 {
        let mut p = IntMatrix::zeros(n, n);
        for i in 0..n {
            p[(i, (i + 1) % n)] = BigInt::one();
        }
        u = u.mul(&p);
    }
    u
}

fn lattice(seed: u64, n: usize) -> GramLattice {
    random_lattice(&mut rng(seed), n)
}

fn epr_of(f: &[(u8, i64, i64)]) -> ExactPosReal {
    const P: [u32; 5] = [2, 3, 5, 7, 11];
    f.iter().fold(ExactPosReal::one(), |acc, &(p, n, d)| {
        acc.mul(&ExactPosReal::from_factors([(BigUint::from(P[p as usize % 5]), q(n, d))]))
    })
}

fn epr_strategy() -> impl Strategy<Value = Vec<(u8, i64, i64)>> {
    prop::collection::vec((0u8..5, -6i64..=6, 1i64..=4), 0..4)
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

/// Saturated sublattice of rank `k` spanned by random small generators.
fn random_sub(l: &GramLattice, seed: u64, k: usize) -> Option<Sublattice> {
    use rand::Rng;
    let mut r = rng(seed ^ 0x5eed);
    let n = l.rank();
    let data: Vec<i64> = (0..k * n).map(|_| r.gen_range(-2..=2)).collect();
    let s = Sublattice::span(l, &IntMatrix::from_i64(k, n, &data)).ok()?;
    (s.rank() == k).then_some(s)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn det_matches_cofactor_expansion(m in square(4)) {
        let n = m.len();
        let r = RatMatrix::from_int_rows(&m);
        prop_assert_eq!(det_exact(&r).unwrap(), q(cofactor_det(&m), 1));
        let flat: Vec<i64> = m.iter().flatten().copied().collect();
        prop_assert_eq!(IntMatrix::from_i64(n, n, &flat).det(), BigInt::from(cofactor_det(&m)));
    }

    #[test]
    fn sylvester_law(m in symmetric(5), ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..8), swap: bool) {
        let n = m.len();
        let g = RatMatrix::from_int_rows(&m);
        let u = unimodular(n, &ops, swap).to_rat();
        let before = signature_exact(&g).unwrap();
        let after = signature_exact(&u.congruence(&g)).unwrap();
        prop_assert_eq!(before, after);
        prop_assert_eq!(before.plus + before.minus + before.zero, n);
        prop_assert_eq!(before.rank(), g.rank());
    }

    #[test]
    fn epr_comparison_is_a_total_order(a in epr_strategy(), b in epr_strategy(), c in epr_strategy()) {
        let (x, y, z) = (epr_of(&a), epr_of(&b), epr_of(&c));
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x <= y && y <= z {
            prop_assert!(x <= z);
        }
        prop_assert_eq!(x.cmp(&y) == Ordering::Equal, x == y);
        // agrees with rational comparison whenever both sides are rational
        if let (Some(p), Some(r)) = (x.to_rat(), y.to_rat()) {
            prop_assert_eq!(x.cmp(&y), p.cmp(&r));
        }
        prop_assert_eq!(x.mul(&y).div(&y), x.clone());
        prop_assert!(x.mul(&x.inv()).is_one());
    }

    #[test]
    fn saturation_index_law(seed: u64, n in 2usize..=4, k in 1usize..=3) {
        use rand::Rng;
        let k = k.min(n);
        let mut r = rng(seed);
        let data: Vec<i64> = (0..k * n).map(|_| r.gen_range(-4..=4)).collect();
        let gens = IntMatrix::from_i64(k, n, &data);
        prop_assume!(gens.to_rat().rank() == k);
        let s = saturate(&gens);
        prop_assert_eq!(saturate(&s), s.clone());
        let l = lattice(seed, n);
        let dg = gens.to_rat().congruence(l.gram()).det().unwrap();
        let ds = s.to_rat().congruence(l.gram()).det().unwrap();
        let idx = saturation_index(&gens);
        prop_assert_eq!(dg, ds * Q::from_integer(&idx * &idx));
        // the index is the content of the Plücker vector
        let (_, content) = plucker(&basis_rows(&gens), n);
        prop_assert_eq!(idx, BigInt::from(content));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn det_multiplies_over_quotients(seed: u64, n in 2usize..=4, k in 1usize..=3) {
        let l = lattice(seed, n);
        let Some(f) = random_sub(&l, seed, k.min(n - 1)) else { return Ok(()) };
        let quo = l.quotient(&f).unwrap();
        prop_assert_eq!(l.det().clone(), f.det() * quo.lattice().det());
        // the quotient is the perp's dual: det(L/F) = 1/det(F^perp in dual)
        let perp = f.perp().unwrap();
        prop_assert_eq!(quo.lattice().det().clone(), perp.det().recip());
    }

    #[test]
    fn dual_is_an_involution_and_inverts_heights(seed: u64, n in 1usize..=5) {
        let l = lattice(seed, n);
        let dd = l.dual().dual();
        prop_assert_eq!(dd.gram(), l.gram());
        prop_assert_eq!(l.dual().sq_height().value, l.sq_height().value.inv());
        prop_assert_eq!(l.dual().det().clone(), l.det().recip());
    }

    #[test]
    fn reduced_height_comparison_is_a_preorder(s1: u64, s2: u64, s3: u64) {
        let hs: Vec<_> = [(s1, 1), (s2, 2), (s3, 3)].iter().map(|&(s, n)| lattice(s, n).sq_height()).collect();
        for a in &hs {
            for b in &hs {
                prop_assert_eq!(a.cmp_reduced(b), b.cmp_reduced(a).reverse());
                prop_assert_eq!(a.cmp_reduced(b), a.reduced().cmp(&b.reduced()));
                for c in &hs {
                    if a.cmp_reduced(b) != Ordering::Greater && b.cmp_reduced(c) != Ordering::Greater {
                        prop_assert_ne!(a.cmp_reduced(c), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_and_product_determinants(s1: u64, s2: u64, n in 1usize..=3, m in 1usize..=3) {
        let (e, f) = (lattice(s1, n), lattice(s2, m));
        let t = e.tensor_product(&f);
        prop_assert_eq!(t.rank(), n * m);
        prop_assert_eq!(t.det().clone(), num_traits::pow(e.det().clone(), m) * num_traits::pow(f.det().clone(), n));
        let p = e.direct_product(&f);
        prop_assert_eq!(p.det().clone(), e.det() * f.det());
        // tensor heights multiply rank-wise: H(E (x) F)^2 = H(E)^(2m) H(F)^(2n)
        let h = e.sq_height().value.powi(m as i64).mul(&f.sq_height().value.powi(n as i64));
        prop_assert_eq!(t.sq_height().value, h);
    }

    #[test]
    fn perp_reverses_inclusion(seed: u64, n in 3usize..=5) {
        let l = lattice(seed, n);
        let Some(f) = random_sub(&l, seed, 1) else { return Ok(()) };
        let Some(extra) = random_sub(&l, seed.wrapping_add(1), 1) else { return Ok(()) };
        let g = f.sum(&extra);
        prop_assume!(!g.is_full());
        prop_assert!(g.contains(&f));
        let (fp, gp) = (f.perp().unwrap(), g.perp().unwrap());
        prop_assert!(fp.contains(&gp));
        prop_assert_eq!(fp.rank() + f.rank(), n);
        // perp of the perp, read back in the original lattice, is F
        let back = fp.perp().unwrap().rehome(&l);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn filtration_is_scale_equivariant(seed: u64, n in 2usize..=4, num in 1i64..=9, den in 1i64..=9) {
        let l = lattice(seed, n);
        let s = q(num, den);
        let f = gs_filtration(&l, &cfg()).unwrap();
        let fs = gs_filtration(&l.scale(&s).unwrap(), &cfg()).unwrap();
        prop_assert_eq!(f.len(), fs.len());
        let se = ExactPosReal::from_rat(&s).unwrap();
        for (a, b) in f.steps.iter().zip(&fs.steps) {
            prop_assert_eq!(a.basis(), b.basis());
            prop_assert_eq!(b.sq_height().value.clone(), a.sq_height().value.mul(&se.powi(a.rank() as i64)));
        }
        prop_assert!(recheck_filtration(&f).is_ok());
    }

    #[test]
    fn min_height_sandwich(seed: u64, n in 2usize..=4, k in 1usize..=3) {
        let l = lattice(seed, n);
        let Some(f) = random_sub(&l, seed, k.min(n - 1)) else { return Ok(()) };
        let he = h_min(&l, &cfg()).unwrap().reduced();
        let hf = h_min(&f.as_lattice(), &cfg()).unwrap().reduced();
        let hq = h_min(l.quotient(&f).unwrap().lattice(), &cfg()).unwrap().reduced();
        prop_assert!(hf.clone().min(hq) <= he);
        prop_assert!(he <= hf);
    }

    #[test]
    fn min_height_of_products(s1: u64, s2: u64, n in 1usize..=2, m in 1usize..=2) {
        let (e, f) = (lattice(s1, n), lattice(s2, m));
        let hp = h_min(&e.direct_product(&f), &cfg()).unwrap().reduced();
        let he = h_min(&e, &cfg()).unwrap().reduced();
        let hf = h_min(&f, &cfg()).unwrap().reduced();
        prop_assert_eq!(hp, he.min(hf));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn isometries_satisfy_the_gram_equation(seed: u64, n in 1usize..=3, ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..5)) {
        let src = lattice(seed, n);
        let c = unimodular(n, &ops, false);
        let target = GramLattice::new(c.to_rat().congruence(src.gram())).unwrap();
        let list = isometries(&src, &target, &IsometryOptions::default()).unwrap();
        prop_assert!(list.complete);
        prop_assert!(!list.maps.is_empty());
        for u in &list.maps {
            prop_assert_eq!(&u.to_rat().transpose().congruence(target.gram()), src.gram());
            prop_assert_eq!(u.det().abs(), BigInt::one());
        }
        let aut = automorphisms(&src, DEFAULT_ISOMETRY_BUDGET).unwrap();
        prop_assert_eq!(aut.order as usize, list.maps.len());
        prop_assert_eq!(aut.order as u64, brute_force_aut_order(&src));
        for g in &aut.generators {
            prop_assert_eq!(&g.to_rat().transpose().congruence(src.gram()), src.gram());
        }
    }

    #[test]
    fn isoduality_ratio_and_witt_index(seed: u64) {
        let l = random_rank2(&mut rng(seed));
        let w = isoduality_witness(&l, &Default::default()).unwrap().unwrap();
        let n = l.rank();
        prop_assert!((num_traits::pow(w.ratio.clone(), n) * num_traits::pow(l.det().clone(), 2)).is_one());
        prop_assert!(!w.pairing_s.det().unwrap().is_zero());
        if let Some(o) = &w.orthogonal {
            let inertia = signature_exact(&o.pairing).unwrap();
            let s = inertia.signature();
            let witt = (n - s.unsigned_abs() as usize) / 2;
            prop_assert_eq!(inertia.witt_index(), witt);
            // a short isotropic vector exists only when the Witt index allows it
            let isotropic = Oracle::new(&l).vectors(4 * Oracle::new(&l).lambda1(), false).into_iter().any(|(v, _)| {
                let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                o.pair(&b, &b).is_zero()
            });
            prop_assert!(!isotropic || witt >= 1);
        }
        prop_assert_eq!(w.orthogonal.is_some(), w.types_realizable.contains(&PairingType::Orthogonal));
        prop_assert_eq!(w.symplectic.is_some(), w.types_realizable.contains(&PairingType::Symplectic));
    }

    #[test]
    fn pairing_types_do_not_depend_on_the_seed(seed: u64, pick in 0usize..64) {
        let l = random_rank2(&mut rng(seed));
        let w = isoduality_witness(&l, &Default::default()).unwrap().unwrap();
        prop_assume!(w.types_complete);
        let aut = automorphisms(&l, DEFAULT_ISOMETRY_BUDGET).unwrap();
        let other = w.examined[pick % w.examined.len()].u.clone();
        let w2 = witness_from_seed(&l, other, &aut, 2048).unwrap();
        prop_assert_eq!(&w.types_realizable, &w2.types_realizable);
        prop_assert_eq!(&w.orthogonal_signatures, &w2.orthogonal_signatures);
    }

    #[test]
    fn tensor_pairings_and_signatures_multiply(s1: u64, s2: u64) {
        let (e, f) = (random_rank2(&mut rng(s1)), random_rank2(&mut rng(s2)));
        let we = isoduality_witness(&e, &Default::default()).unwrap().unwrap();
        let wf = isoduality_witness(&f, &Default::default()).unwrap().unwrap();
        let t = e.tensor_product(&f);
        let se = we.primary();
        let sf = wf.primary();
        let st = Similarity::new(se.u.kron(&sf.u));
        prop_assert_eq!(&st.pairing, &se.pairing.kron(&sf.pairing));
        prop_assert!(slopeforge::symmetry::is_similarity(&t, &st.u, &(&we.ratio * &wf.ratio)));
        let sig = |m: &RatMatrix| signature_exact(m).unwrap().signature();
        if se.is_symmetric() && sf.is_symmetric() {
            prop_assert_eq!(sig(&st.pairing), sig(&se.pairing) * sig(&sf.pairing));
        }
        // destabilizer rank bound for the tensor from its orthogonal witness
        let v = check_multiplicativity(&e, &f, &BostConfig::default()).unwrap();
        prop_assert!(v.lhs_reduced() <= v.rhs_reduced());
        if let (Some(a), Some(b)) = (we.max_abs_signature(), wf.max_abs_signature()) {
            let flag = h_min(&t, &cfg()).unwrap();
            if !flag.destabilizer.is_full() {
                prop_assert!(2 * flag.destabilizer.rank() <= 4 - (a * b) as usize);
            }
        }
    }

    #[test]
    fn one_sided_tensor_bound(s1: u64, s2: u64, n in 1usize..=3) {
        let (e, f) = (lattice(s1, n), lattice(s2, 4 - n));
        let v = check_multiplicativity(&e, &f, &BostConfig::default()).unwrap();
        prop_assert!(v.lhs_reduced() <= v.rhs_reduced());
        prop_assert_eq!(v.equal, v.lhs_reduced() == v.rhs_reduced());
        prop_assert!(v.violating_witness.is_none());
    }

    #[test]
    fn lattice_files_round_trip(seed: u64, n in 1usize..=5) {
        let l = lattice(seed, n);
        let text = emit_lattice(&l);
        let back = parse_lattice(&text).unwrap();
        prop_assert_eq!(back.gram(), l.gram());
        prop_assert_eq!(emit_lattice(&back), text);
    }
}

#[test]
fn catalog_round_trips_bit_exactly() {
    for name in CATALOG_NAMES {
        let l = catalog(name).unwrap();
        let text = emit_lattice(&l);
        let back = parse_lattice(&text).unwrap();
        assert_eq!(back.gram(), l.gram(), "{name}");
        assert_eq!(emit_lattice(&back), text, "{name}");
    }
}

#[test]
fn svg_rendering_is_deterministic() {
    for name in ["A2", "diag(1,4)", "diag(1,1,4)", "Z3"] {
        let l = catalog(name).unwrap();
        let p1 = gs_filtration(&l, &cfg()).unwrap().polygon();
        let p2 = gs_filtration(&l, &cfg()).unwrap().polygon();
        assert_eq!(polygon_svg(name, &p1), polygon_svg(name, &p2), "{name}");
    }
}

#[test]
fn decomposition_claim_logic() {
    let claim = DecompositionClaim { components: 2, pairwise_non_isomorphic: true, absolutely_irreducible: true };
    for name in ["Z2", "A2", "D4"] {
        let r = check_decomposition_claim(&catalog(name).unwrap(), &claim, &cfg()).unwrap();
        assert!(r.applicable && r.passed(), "{name}");
    }
    // a false claim on an unstable lattice is caught
    let r = check_decomposition_claim(&catalog("diag(1,4)").unwrap(), &claim, &cfg()).unwrap();
    assert!(r.applicable && !r.passed());
    let weak = DecompositionClaim { components: 2, pairwise_non_isomorphic: false, absolutely_irreducible: true };
    let r = check_decomposition_claim(&catalog("diag(1,4)").unwrap(), &weak, &cfg()).unwrap();
    assert!(!r.applicable);
}
