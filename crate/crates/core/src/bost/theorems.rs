use serde::Serialize;

use super::{multiplicativity_with, BostConfig, Hmin};
use crate::error::{Error, Result};
use crate::exact::signature_exact;
use crate::lattice::{GramLattice, Sublattice};
use crate::rankin::{gs_filtration, subquotient};
use crate::report::CheckReport;
use crate::symmetry::{is_similarity, is_totally_isotropic, IsodualityWitness, Similarity};

/// Split `F` along `F_1 < ... < F_t = F` and check both hypotheses and the
/// conclusion by enumeration.
pub fn check_c1_split(e: &GramLattice, flag: &[Sublattice], cfg: &BostConfig) -> Result<CheckReport> {
    c1_with(&Hmin::new(), e, flag, cfg)
}

pub(crate) fn c1_with(hm: &Hmin, e: &GramLattice, flag: &[Sublattice], cfg: &BostConfig) -> Result<CheckReport> {
    let Some(top) = flag.last() else {
        return Err(Error::Dimension("empty flag".into()));
    };
    let f = top.ambient().clone();
    let mut r = CheckReport::new(format!("split of {} (x) {} along {} steps", e.name(), f.name(), flag.len()));
    let chain_ok = top.is_full() && flag.windows(2).all(|w| w[0].rank() < w[1].rank() && w[1].contains(&w[0]));
    r.push("flag is a chain ending at F", chain_ok, "");
    if !chain_ok {
        return Ok(r);
    }
    let mut quotients = Vec::with_capacity(flag.len());
    let mut prev: Option<&Sublattice> = None;
    for s in flag {
        quotients.push(subquotient(prev, s)?);
        prev = Some(s);
    }
    for (i, q) in quotients.iter().enumerate() {
        let v = multiplicativity_with(hm, e, q, cfg)?;
        r.push(
            format!("(i) quotient {} multiplicative", i + 1),
            v.equal,
            format!("rank {}, H_min^2 {}", q.rank(), v.lhs_reduced()),
        );
    }
    for (i, w) in quotients.windows(2).enumerate() {
        let (a, b) = (hm.sq(&w[0], cfg)?, hm.sq(&w[1], cfg)?);
        r.push(format!("(ii) H_min rises at step {}", i + 1), a <= b, format!("{a} <= {b}"));
    }
    for (i, s) in flag.iter().enumerate().take(flag.len() - 1) {
        let v = multiplicativity_with(hm, e, &s.as_lattice(), cfg)?;
        r.push(format!("partial product F_{} multiplicative", i + 1), v.equal, "");
    }
    let v = multiplicativity_with(hm, e, &f, cfg)?;
    r.push("conclusion H_min(E (x) F) = H_min(E) H_min(F)", v.equal, format!("H_min^2 = {}", v.lhs_reduced()));
    Ok(r)
}

fn is_stable(hm: &Hmin, l: &GramLattice, cfg: &BostConfig) -> Result<bool> {
    if l.rank() == 1 {
        return Ok(true);
    }
    let f = hm.enumerated(l, cfg)?;
    Ok(f.destabilizer.is_full() && f.minimizers.iter().all(|m| m.is_full()))
}

/// Rank-2 `F` that is not stable.
pub fn check_r2(e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<CheckReport> {
    let hm = Hmin::new();
    let subject = format!("rank-2 split {} (x) {}", e.name(), f.name());
    if f.rank() != 2 {
        return Err(Error::Dimension(format!("F must have rank 2, has rank {}", f.rank())));
    }
    if is_stable(&hm, f, cfg)? {
        return Ok(CheckReport::not_applicable(subject, "F is stable"));
    }
    let mut r = CheckReport::new(subject);
    let direct = multiplicativity_with(&hm, e, f, cfg)?;
    r.push("direct enumeration", direct.equal, format!("H_min^2 = {}", direct.lhs_reduced()));
    let flag = hm.flag(f, cfg)?;
    if flag.destabilizer.is_full() {
        r.push("F semistable, not stable", true, "direct route only");
    } else {
        r.push("destabilizer has rank 1", flag.destabilizer.rank() == 1, "");
        let split = c1_with(&hm, e, &[flag.destabilizer.clone(), f.full()], cfg)?;
        let agree = split.passed() == direct.equal;
        r.extend("split: ", split);
        r.push("routes agree", agree, "");
    }
    Ok(r)
}

fn orthogonal<'a>(w: &'a IsodualityWitness) -> Option<(&'a Similarity, i64)> {
    let s = w.orthogonal.as_ref()?;
    Some((s, s.inertia()?.signature()))
}

/// Signature hypothesis `|s_E s_F| >= rank E rank F - 8`.
pub fn check_sgn(
    e: &GramLattice,
    we: &IsodualityWitness,
    f: &GramLattice,
    wf: &IsodualityWitness,
    cfg: &BostConfig,
) -> Result<CheckReport> {
    let hm = Hmin::new();
    let subject = format!("signature bound {} (x) {}", e.name(), f.name());
    let (Some((se, sig_e)), Some((sf, sig_f))) = (orthogonal(we), orthogonal(wf)) else {
        return Ok(CheckReport::not_applicable(subject, "orthogonal similarities required for both factors"));
    };
    let (n, m) = (e.rank() as i64, f.rank() as i64);
    let prod = sig_e * sig_f;
    let mut r = CheckReport::new(subject);
    let hyp = prod.abs() >= n * m - 8;
    r.push("hypothesis |s_E s_F| >= nm - 8", hyp, format!("|{sig_e} * {sig_f}| = {} vs {}", prod.abs(), n * m - 8));
    if !hyp {
        r.applicable = false;
        return Ok(r);
    }
    let t = e.tensor_product(f);
    let tensor = Similarity::new(se.u.kron(&sf.u));
    r.push(
        "tensor map is a similarity",
        is_similarity(&t, &tensor.u, &(&we.ratio * &wf.ratio)),
        format!("ratio {}", &we.ratio * &wf.ratio),
    );
    r.push("pairing of tensor = tensor of pairings", tensor.pairing == se.pairing.kron(&sf.pairing), "");
    let sig_t = signature_exact(&tensor.pairing)?.signature();
    r.push("signature multiplicative", sig_t == prod, format!("{sig_t} = {prod}"));
    let v = multiplicativity_with(&hm, e, f, cfg)?;
    r.push("conclusion H_min(E (x) F) = H_min(E) H_min(F)", v.equal, format!("H_min^2 = {}", v.lhs_reduced()));
    let flag = hm.flag(&t, cfg)?;
    if flag.destabilizer.is_full() {
        r.push("tensor semistable", true, "");
    } else {
        let d = flag.destabilizer.rank();
        r.push("tensor destabilizer totally isotropic", is_totally_isotropic(&tensor, &flag.destabilizer), format!("rank {d}"));
        let bound = ((n * m - prod.abs()) / 2) as usize;
        r.push("tensor destabilizer rank bound", d <= bound, format!("{d} <= {bound}"));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MixCase {
    DefiniteDefinite,
    DefiniteLorentzian,
    LorentzianLorentzian,
}

fn has_sig(w: &IsodualityWitness, target: i64) -> Option<Similarity> {
    if !w.orthogonal_signatures.iter().any(|s| s.abs() == target) {
        return None;
    }
    w.examined.iter().find(|s| s.inertia().is_some_and(|i| i.signature().abs() == target)).cloned()
}

/// Definite/Lorentzian case analysis, conclusion by enumeration, and the
/// split `F_1 < F_{l-1} < F` behind the Lorentzian cases.
pub fn check_mix(
    e: &GramLattice,
    we: &IsodualityWitness,
    f: &GramLattice,
    wf: &IsodualityWitness,
    cfg: &BostConfig,
) -> Result<CheckReport> {
    let hm = Hmin::new();
    let subject = format!("definite/Lorentzian {} (x) {}", e.name(), f.name());
    let (n, m) = (e.rank() as i64, f.rank() as i64);
    let (de, df) = (has_sig(we, n), has_sig(wf, m));
    let (le, lf) = (has_sig(we, n - 2), has_sig(wf, m - 2));
    let (ste, stf) = (is_stable(&hm, e, cfg)?, is_stable(&hm, f, cfg)?);
    // (case, Lorentzian factor to split, its Lorentzian similarity)
    let pick = if de.is_some() && df.is_some() {
        Some((MixCase::DefiniteDefinite, None))
    } else if de.is_some() && lf.is_some() && !stf {
        Some((MixCase::DefiniteLorentzian, Some((f, lf.clone().expect("checked")))))
    } else if df.is_some() && le.is_some() && !ste {
        Some((MixCase::DefiniteLorentzian, Some((e, le.clone().expect("checked")))))
    } else if le.is_some() && lf.is_some() && !ste && !stf {
        let unstable_f = !hm.flag(f, cfg)?.destabilizer.is_full();
        let side = if unstable_f || hm.flag(e, cfg)?.destabilizer.is_full() {
            (f, lf.clone().expect("checked"))
        } else {
            (e, le.clone().expect("checked"))
        };
        Some((MixCase::LorentzianLorentzian, Some(side)))
    } else {
        None
    };
    let Some((case, split)) = pick else {
        return Ok(CheckReport::not_applicable(subject, "no case of the definite/Lorentzian analysis applies"));
    };
    let mut r = CheckReport::new(format!("{subject}: {case:?}"));
    let v = multiplicativity_with(&hm, e, f, cfg)?;
    r.push("conclusion H_min(E (x) F) = H_min(E) H_min(F)", v.equal, format!("H_min^2 = {}", v.lhs_reduced()));
    let Some((g, sim)) = split else { return Ok(r) };
    let other = if std::ptr::eq(g, f) { e } else { f };
    let fl = gs_filtration(g, &cfg.search)?;
    if fl.is_semistable() {
        r.push("split factor semistable, not stable", true, "direct route only");
        return Ok(r);
    }
    let len = fl.len();
    let f1 = &fl.steps[0];
    r.push("F_1 has rank 1", f1.rank() == 1, format!("rank {}", f1.rank()));
    r.push("F_1 totally isotropic", is_totally_isotropic(&sim, f1), "");
    let top = &fl.steps[len - 2];
    r.push("F / F_(l-1) has rank 1", g.rank() - top.rank() == 1, "");
    let mut flag = vec![f1.clone()];
    if len >= 3 {
        let b = top.basis().to_rat();
        let restricted = b.mul(&sim.pairing).mul(&b.transpose());
        let inertia = signature_exact(&restricted)?;
        let k = top.rank() - f1.rank();
        r.push(
            "form on F_(l-1)/F_1 definite",
            inertia.zero == f1.rank() && inertia.signature().unsigned_abs() as usize == k,
            format!("inertia (+{}, -{}, 0:{})", inertia.plus, inertia.minus, inertia.zero),
        );
        flag.push(top.clone());
    }
    flag.push(g.full());
    let split = c1_with(&hm, other, &flag, cfg)?;
    r.extend("split: ", split);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::symmetry::{isoduality_witness, IsodualOptions};

    fn d(entries: &[i64]) -> GramLattice {
        GramLattice::diag(&entries.iter().map(|&a| rat(a, 1)).collect::<Vec<_>>()).unwrap()
    }

    fn w(l: &GramLattice) -> IsodualityWitness {
        isoduality_witness(l, &IsodualOptions::default()).unwrap().unwrap()
    }

    #[test]
    fn r2_cases() {
        let cfg = BostConfig::default();
        let a2 = GramLattice::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let r = check_r2(&a2, &d(&[1, 4]), &cfg).unwrap();
        assert!(r.passed(), "{r}");
        assert!(check_r2(&a2, &d(&[1, 1]), &cfg).unwrap().passed());
        assert!(!check_r2(&a2, &a2, &cfg).unwrap().applicable);
    }

    #[test]
    fn c1_cases() {
        let cfg = BostConfig::default();
        let f = d(&[1, 4]);
        let fl = gs_filtration(&f, &cfg.search).unwrap();
        assert!(check_c1_split(&GramLattice::standard(2), &fl.steps, &cfg).unwrap().passed());
        let z3 = GramLattice::standard(3);
        assert!(check_c1_split(&GramLattice::standard(2), &[z3.full()], &cfg).unwrap().passed());
    }

    #[test]
    fn sgn_and_mix() {
        let cfg = BostConfig::default();
        let z2 = GramLattice::standard(2);
        let d14 = d(&[1, 4]);
        let d19 = d(&[1, 9]);
        for (a, b) in [(&z2, &z2), (&z2, &d14), (&d14, &d14)] {
            let r = check_sgn(a, &w(a), b, &w(b), &cfg).unwrap();
            assert!(r.passed(), "{r}");
        }
        let z3 = GramLattice::standard(3);
        let r = check_mix(&z3, &w(&z3), &z3, &w(&z3), &cfg).unwrap();
        assert!(r.passed() && r.subject.contains("DefiniteDefinite"), "{r}");
        let r = check_mix(&z2, &w(&z2), &d14, &w(&d14), &cfg).unwrap();
        assert!(r.passed() && r.subject.contains("DefiniteLorentzian"), "{r}");
        let r = check_mix(&d14, &w(&d14), &d19, &w(&d19), &cfg).unwrap();
        assert!(r.passed() && r.subject.contains("LorentzianLorentzian"), "{r}");
    }
}
