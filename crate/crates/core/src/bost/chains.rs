//! Exact instances of the balancing chains.
//!
//! `E[t]` denotes `E` with Gram scaled by `s = t^2`. All values below are
//! squared minimal reduced heights; `E[t] (x) F = (E (x) F)[t]` and
//! `E[t]^dual = E^dual[1/t]`, so every term is an enumerated height times a
//! known power of `s`.

use super::{balance_with, multiplicativity_with, BostConfig, Hmin};
use crate::error::Result;
use crate::exact::{ExactPosReal, Rat};
use crate::lattice::GramLattice;
use crate::rankin::{gs_filtration, subquotient};
use crate::report::CheckReport;
use crate::symmetry::{find_similarity, isometries, isoduality_ratio, IsometryOptions};

fn cmp_detail(a: &ExactPosReal, b: &ExactPosReal) -> String {
    format!("{a} vs {b}")
}

/// `E x E'` materialised when both scales are rational and the rank of
/// `(E[t] x E[t]^dual) (x) F` is within the cap.
fn materialize(
    e: &GramLattice,
    s: &ExactPosReal,
    f: &GramLattice,
    cfg: &BostConfig,
) -> Result<Option<(GramLattice, GramLattice)>> {
    let Some(q) = s.to_rat() else { return Ok(None) };
    let p = e.scale(&q)?.direct_product(&e.dual().scale(&(Rat::from_integer(1.into()) / &q))?);
    let t = p.tensor_product(f);
    if t.rank() > cfg.rank_cap && !cfg.uncertified() {
        return Ok(None);
    }
    Ok(Some((p, t)))
}

/// Balance `E`, then compare `H_min((E[t] x E[t]^dual) (x) F)` computed
/// by direct enumeration, by the product law, and by the factored formula.
fn balanced_product(
    hm: &Hmin,
    r: &mut CheckReport,
    tag: &str,
    e: &GramLattice,
    f: &GramLattice,
    cfg: &BostConfig,
) -> Result<(ExactPosReal, ExactPosReal)> {
    let b = balance_with(hm, e, cfg)?;
    let s = b.scale_sq.clone();
    let (a, fa) = (b.hmin_sq.clone(), hm.sq(f, cfg)?);
    let x1 = hm.sq(&e.tensor_product(f), cfg)?;
    let x2 = hm.sq(&e.dual().tensor_product(f), cfg)?;
    let via_ds = x1.mul(&s).min(x2.div(&s));
    let factored = s.mul(&a).mul(&fa);
    r.push(
        format!("{tag}: scales balance"),
        a.mul(&s) == b.hmin_dual_sq.div(&s),
        format!("s = {s}{}", if b.symbolic { " (symbolic)" } else { "" }),
    );
    if let Some((p, t)) = materialize(e, &s, f, cfg)? {
        let hp = hm.sq(&p, cfg)?;
        r.push(format!("{tag}: H_min(E[t] x E[t]^dual) = H_min(E[t])"), hp == a.mul(&s), cmp_detail(&hp, &a.mul(&s)));
        let direct = hm.sq(&t, cfg)?;
        r.push(format!("{tag}: direct = product law"), direct == via_ds, cmp_detail(&direct, &via_ds));
    }
    r.push(format!("{tag}: product = t H_min H_min"), via_ds == factored, cmp_detail(&via_ds, &factored));
    r.push(format!("{tag}: min <= t H_min(E (x) F)"), via_ds <= x1.mul(&s), cmp_detail(&via_ds, &x1.mul(&s)));
    r.push(format!("{tag}: t H_min(E (x) F) <= t H_min(E) H_min(F)"), x1 <= a.mul(&fa), cmp_detail(&x1, &a.mul(&fa)));
    Ok((x1, a.mul(&fa)))
}

/// Instantiate the reduction chains on `E`, `F`: the balancing argument
/// on `E` itself, then the semistable step or the induction step.
pub fn check_redsi_chain(e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<CheckReport> {
    let hm = Hmin::new();
    let subject = format!("reduction chains {} (x) {}", e.name(), f.name());
    let budget = cfg.isodual.budget_nodes;
    if find_similarity(e, budget)?.is_none() || find_similarity(f, budget)?.is_none() {
        return Ok(CheckReport::not_applicable(subject, "both factors must be isodual"));
    }
    let mut r = CheckReport::new(subject);
    let (x, y) = balanced_product(&hm, &mut r, "balance E", e, f, cfg)?;
    r.push("balance E: H_min(E (x) F) = H_min(E) H_min(F)", x == y, cmp_detail(&x, &y));

    let se = hm.flag(e, cfg)?.destabilizer.is_full();
    let sf = hm.flag(f, cfg)?.destabilizer.is_full();
    match (se, sf) {
        (true, true) => {
            let v = multiplicativity_with(&hm, e, f, cfg)?;
            r.push("both semistable: multiplicative", v.equal, format!("H_min^2 = {}", v.lhs_reduced()));
        }
        (false, true) => step_one(&hm, &mut r, e, f, cfg)?,
        (true, false) => step_one(&hm, &mut r, f, e, cfg)?,
        (false, false) => step_two(&hm, &mut r, e, f, cfg)?,
    }
    Ok(r)
}

/// `E` unstable, `F` semistable.
fn step_one(hm: &Hmin, r: &mut CheckReport, e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<()> {
    let e1 = hm.flag(e, cfg)?.destabilizer.as_lattice();
    let b = balance_with(hm, &e1, cfg)?;
    let bal = b.hmin_sq.mul(&b.scale_sq).min(b.hmin_dual_sq.div(&b.scale_sq));
    // E_1 is semistable, so H_r(E_1[t] x E_1[t]^dual) = 1
    r.push("step 1: E_1[t] x E_1[t]^dual semistable", bal.is_one(), format!("H_min^2 = {bal}"));
    let (x, y) = balanced_product(hm, r, "step 1", &e1, f, cfg)?;
    r.push("step 1: H_min(E_1 (x) F) = H_min(E_1) H_min(F)", x == y, cmp_detail(&x, &y));
    let a = hm.sq(e, cfg)?;
    r.push("step 1: H_min(E) = H_min(E_1)", a == b.hmin_sq, cmp_detail(&a, &b.hmin_sq));
    let ef = hm.sq(&e.tensor_product(f), cfg)?;
    r.push("step 1: H_min(E_1 (x) F) <= H_min(E (x) F)", x <= ef, cmp_detail(&x, &ef));
    let prod = a.mul(&hm.sq(f, cfg)?);
    r.push("step 1: H_min(E (x) F) = H_min(E) H_min(F)", ef == prod, cmp_detail(&ef, &prod));
    Ok(())
}

/// Neither factor semistable: split `F` along `F_1 < F_{l-1} < F`.
fn step_two(hm: &Hmin, r: &mut CheckReport, e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<()> {
    let fl = gs_filtration(f, &cfg.search)?;
    let len = fl.len();
    let f1 = fl.steps[0].as_lattice();
    let top = &fl.steps[len - 2];
    let top_l = top.as_lattice();
    let q = subquotient(Some(top), &f.full())?;
    let a = hm.sq(e, cfg)?;
    let ef1 = hm.sq(&e.tensor_product(&f1), cfg)?;
    let eft = hm.sq(&e.tensor_product(&top_l), cfg)?;
    let efq = hm.sq(&e.tensor_product(&q), cfg)?;
    let ef = hm.sq(&e.tensor_product(f), cfg)?;
    let h1 = hm.sq(&f1, cfg)?;

    if len >= 3 {
        let mid = subquotient(Some(&fl.steps[0]), top)?;
        let emid = hm.sq(&e.tensor_product(&mid), cfg)?;
        let lower = ef1.clone().min(emid.clone());
        r.push("step 2: H(E F_1) >= H(E F_(l-1)) >= min", ef1 >= eft && eft >= lower, format!("{ef1} >= {eft} >= {lower}"));
        let iso = find_similarity(&mid, cfg.isodual.budget_nodes)?.is_some();
        r.push("step 2: F_(l-1)/F_1 isodual", iso, format!("rank {}", mid.rank()));
        let hmid = hm.sq(&mid, cfg)?;
        r.push("step 2: E (x) F_(l-1)/F_1 multiplicative", emid == a.mul(&hmid), cmp_detail(&emid, &a.mul(&hmid)));
        r.push("step 2: H_min(F_1) <= H_min(F_(l-1)/F_1)", h1 <= hmid, cmp_detail(&h1, &hmid));
    }
    r.push("step 2: H(E F_1) <= H(E) H(F_1)", ef1 <= a.mul(&h1), cmp_detail(&ef1, &a.mul(&h1)));
    r.push("step 2: H(E F_(l-1)) = H(E F_1)", eft == ef1, cmp_detail(&eft, &ef1));
    let lower = eft.clone().min(efq.clone());
    r.push("step 2: H(E F_(l-1)) >= H(E F) >= min", eft >= ef && ef >= lower, format!("{eft} >= {ef} >= {lower}"));
    let pq = f1.direct_product(&q);
    let epq = e.tensor_product(&pq);
    let split_min = ef1.clone().min(efq.clone());
    if epq.rank() <= cfg.rank_cap || cfg.uncertified() {
        let direct = hm.sq(&epq, cfg)?;
        r.push("step 2: H(E (F_1 x F/F_(l-1))) = min", direct == split_min, cmp_detail(&direct, &split_min));
    }

    // F/F_(l-1) is F_1^dual rescaled by 1/c
    let c = isoduality_ratio(f).expect("isodual factor has a rational ratio");
    let inv_c = Rat::from_integer(1.into()) / &c;
    let target = f1.dual().scale(&inv_c)?;
    let opts = IsometryOptions { first_only: true, budget_nodes: cfg.isodual.budget_nodes, ..Default::default() };
    let iso = isometries(&q, &target, &opts)?;
    r.push("step 2: F/F_(l-1) ~ F_1^dual[1/c]", !iso.maps.is_empty(), format!("c = {c}"));
    let ef1d = hm.sq(&e.tensor_product(&f1.dual()), cfg)?;
    let cq = ExactPosReal::from_rat(&inv_c)?;
    r.push("step 2: H(E F/F_(l-1)) = H(E F_1^dual) / c", efq == ef1d.mul(&cq), cmp_detail(&efq, &ef1d.mul(&cq)));

    let b = balance_with(hm, &f1, cfg)?;
    let s = b.scale_sq.clone();
    let via_ds = ef1.mul(&s).min(ef1d.div(&s));
    let f1d = b.hmin_dual_sq.clone();
    r.push("step 2: balanced F_1 product = t H(E) H(F_1)", via_ds == s.mul(&a).mul(&h1), cmp_detail(&via_ds, &s.mul(&a).mul(&h1)));
    r.push("step 2: ... = t^-1 H(E) H(F_1^dual)", via_ds == a.mul(&f1d).div(&s), cmp_detail(&via_ds, &a.mul(&f1d).div(&s)));
    if let Some((_, t)) = materialize_pair(&f1, &s, e, cfg)? {
        let direct = hm.sq(&t, cfg)?;
        r.push("step 2: balanced F_1 product, direct", direct == via_ds, cmp_detail(&direct, &via_ds));
    }
    r.push("step 2: H(E) H(F_1) = H(E F_1)", ef1 == a.mul(&h1), cmp_detail(&ef1, &a.mul(&h1)));
    r.push("step 2: H(E) H(F_1^dual) = H(E F_1^dual)", ef1d == a.mul(&f1d), cmp_detail(&ef1d, &a.mul(&f1d)));
    let hf = hm.sq(f, cfg)?;
    r.push("step 2: H_min(F) = H_min(F_1)", hf == h1, cmp_detail(&hf, &h1));
    r.push("step 2: H(E F) = H(E) H(F)", ef == a.mul(&hf), cmp_detail(&ef, &a.mul(&hf)));
    Ok(())
}

/// `E (x) (F_1[t] x F_1[t]^dual)`, in that tensor order.
fn materialize_pair(
    f1: &GramLattice,
    s: &ExactPosReal,
    e: &GramLattice,
    cfg: &BostConfig,
) -> Result<Option<(GramLattice, GramLattice)>> {
    Ok(materialize(f1, s, e, cfg)?.map(|(p, _)| {
        let t = e.tensor_product(&p);
        (p, t)
    }))
}
