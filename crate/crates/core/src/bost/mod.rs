//! Tensor products and minimal heights: multiplicativity experiments and
//! the reduction chains built on balancing scales.
//!
//! Heights here are squared reduced heights `H_min^2` as exact positive
//! reals. Scaling a lattice by `s` (Gram `s G`) multiplies every squared
//! reduced height by `s`, so irrational scales are carried symbolically.

mod chains;
mod theorems;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactPosReal, Rat};
use crate::lattice::{GramLattice, SqHeight, Sublattice};
use crate::rankin::{h_min, MinFlag, SearchConfig};
use crate::report::CheckReport;
use crate::symmetry::{double_dual_witnesses, unimodular_certificate, IsodualOptions, IsodualityWitness};

pub use chains::check_redsi_chain;
pub use theorems::{check_c1_split, check_mix, check_r2, check_sgn, MixCase};

pub const DEFAULT_RANK_CAP: usize = 9;

#[derive(Clone, Debug)]
pub struct BostConfig {
    pub search: SearchConfig,
    /// Largest lattice rank enumerated in certified mode.
    pub rank_cap: usize,
    pub isodual: IsodualOptions,
}

impl Default for BostConfig {
    fn default() -> Self {
        BostConfig { search: SearchConfig::default(), rank_cap: DEFAULT_RANK_CAP, isodual: IsodualOptions::default() }
    }
}

impl BostConfig {
    fn uncertified(&self) -> bool {
        self.search.radius_override.is_some()
    }
}

/// Memoised `H_min` computations keyed by Gram matrix.
#[derive(Default)]
pub struct Hmin {
    cache: Mutex<HashMap<String, MinFlag>>,
}

impl Hmin {
    pub fn new() -> Self {
        Self::default()
    }

    /// Minimal flag; for unimodular lattices the definite certificate is
    /// used and `minimizers` holds only the full lattice.
    pub fn flag(&self, l: &GramLattice, cfg: &BostConfig) -> Result<MinFlag> {
        if unimodular_certificate(l).is_some() {
            let full = l.full();
            return Ok(MinFlag { h_min: l.sq_height(), minimizers: vec![full.clone()], destabilizer: full, certified: true });
        }
        self.enumerated(l, cfg)
    }

    /// Minimal flag by enumeration, with every minimizer.
    pub fn enumerated(&self, l: &GramLattice, cfg: &BostConfig) -> Result<MinFlag> {
        if l.rank() > cfg.rank_cap && !cfg.uncertified() {
            return Err(Error::RankCap { rank: l.rank(), cap: cfg.rank_cap });
        }
        let key = format!("{:?}", l.gram());
        if let Some(f) = self.cache.lock().expect("cache").get(&key) {
            return Ok(f.clone());
        }
        let f = h_min(l, &cfg.search)?;
        self.cache.lock().expect("cache").insert(key, f.clone());
        Ok(f)
    }

    /// Squared minimal reduced height.
    pub fn sq(&self, l: &GramLattice, cfg: &BostConfig) -> Result<ExactPosReal> {
        Ok(self.flag(l, cfg)?.reduced())
    }
}

#[derive(Clone, Debug)]
pub struct MultiplicativityVerdict {
    pub e: GramLattice,
    pub f: GramLattice,
    /// Height of the destabilizer of `E (x) F`.
    pub lhs: SqHeight,
    /// Height of `E_1 (x) F_1`; its reduced value is `H_min(E)^2 H_min(F)^2`.
    pub rhs: SqHeight,
    pub equal: bool,
    /// Sublattice of `E (x) F` strictly below the product, if any.
    pub violating_witness: Option<Sublattice>,
    /// The witness height was recomputed by integer elimination and agrees.
    pub witness_reverified: bool,
    pub certified: bool,
}

impl MultiplicativityVerdict {
    pub fn lhs_reduced(&self) -> ExactPosReal {
        self.lhs.reduced()
    }

    pub fn rhs_reduced(&self) -> ExactPosReal {
        self.rhs.reduced()
    }
}

pub fn check_multiplicativity(e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<MultiplicativityVerdict> {
    multiplicativity_with(&Hmin::new(), e, f, cfg)
}

pub(crate) fn multiplicativity_with(
    hm: &Hmin,
    e: &GramLattice,
    f: &GramLattice,
    cfg: &BostConfig,
) -> Result<MultiplicativityVerdict> {
    let t = e.tensor_product(f);
    let fe = hm.flag(e, cfg)?;
    let ff = hm.flag(f, cfg)?;
    let ft = hm.flag(&t, cfg)?;
    let pure = fe.destabilizer.tensor(&ff.destabilizer);
    let (r1, r2) = (fe.destabilizer.rank(), ff.destabilizer.rank());
    let rhs = SqHeight::new(fe.h_min.value.powi(r2 as i64).mul(&ff.h_min.value.powi(r1 as i64)), r1 * r2);
    if pure.sq_height() != rhs {
        return Err(Error::Invariant("height of E_1 (x) F_1 disagrees with the product formula".into()));
    }
    let lhs = ft.h_min.clone();
    let ord = lhs.cmp_reduced(&rhs);
    if ord == Ordering::Greater {
        return Err(Error::Invariant(format!(
            "H_min(E (x) F)^2 = {} exceeds the height {} of E_1 (x) F_1",
            lhs.reduced(),
            rhs.reduced()
        )));
    }
    let mut violating_witness = None;
    let mut witness_reverified = false;
    if ord == Ordering::Less {
        let w = ft.destabilizer.clone();
        witness_reverified = reverify(&w, &rhs);
        violating_witness = Some(w);
    }
    Ok(MultiplicativityVerdict {
        e: e.clone(),
        f: f.clone(),
        lhs,
        rhs,
        equal: ord == Ordering::Equal,
        violating_witness,
        witness_reverified,
        certified: fe.certified && ff.certified && ft.certified,
    })
}

/// Recompute `det` of a sublattice from an integer Gram by Bareiss
/// elimination and compare its reduced height with `bound`.
fn reverify(w: &Sublattice, bound: &SqHeight) -> bool {
    let g = w.ambient().gram();
    let den = g.denominator_lcm();
    let gi = g.map(|x| (x * Rat::from_integer(den.clone())).to_integer());
    let b = w.basis();
    let k = b.rows();
    let gram = b.mul(&gi).mul(&b.transpose());
    let det_num = crate::exact::matrix::bareiss_det(&gram);
    let det = Rat::new(det_num, num_traits::pow(den, k));
    let Ok(h) = SqHeight::from_det(&det, k) else { return false };
    h.cmp_reduced(bound) == Ordering::Less
}

/// Balancing scale `s = t^2` with `H_min(E[t]) = H_min(E[t]^dual)`.
#[derive(Clone, Debug)]
pub struct BalancedPair {
    pub base: GramLattice,
    /// `s = (H_min(E^dual)^2 / H_min(E)^2)^(1/2)`.
    pub scale_sq: ExactPosReal,
    pub symbolic: bool,
    /// `scale(E, s)` when `s` is rational.
    pub scaled: Option<GramLattice>,
    pub hmin_sq: ExactPosReal,
    pub hmin_dual_sq: ExactPosReal,
}

impl BalancedPair {
    /// `H_min(E[t])^2`, equal to `H_min(E[t]^dual)^2`.
    pub fn balanced_sq(&self) -> ExactPosReal {
        self.hmin_sq.mul(&self.scale_sq)
    }
}

pub fn balance(e: &GramLattice, cfg: &BostConfig) -> Result<BalancedPair> {
    balance_with(&Hmin::new(), e, cfg)
}

pub(crate) fn balance_with(hm: &Hmin, e: &GramLattice, cfg: &BostConfig) -> Result<BalancedPair> {
    let a = hm.sq(e, cfg)?;
    let b = hm.sq(&e.dual(), cfg)?;
    let s = b.div(&a).sqrt();
    if a.mul(&s) != b.div(&s) {
        return Err(Error::Invariant("balancing scale does not balance".into()));
    }
    let scaled = s.to_rat().map(|q| e.scale(&q)).transpose()?;
    Ok(BalancedPair { base: e.clone(), symbolic: scaled.is_none(), scale_sq: s, scaled, hmin_sq: a, hmin_dual_sq: b })
}

/// `E x E^dual` with verified orthogonal and symplectic swap witnesses.
#[derive(Clone, Debug)]
pub struct DoubleDual {
    pub lattice: GramLattice,
    pub witness: IsodualityWitness,
}

pub fn double_dual_product(e: &GramLattice) -> Result<DoubleDual> {
    let (lattice, witness) = double_dual_witnesses(e)?;
    Ok(DoubleDual { lattice, witness })
}

/// `H_min(E x F) = min(H_min(E), H_min(F))`, checked by enumeration.
pub fn check_product_law(e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<CheckReport> {
    product_law_with(&Hmin::new(), e, f, cfg)
}

pub(crate) fn product_law_with(hm: &Hmin, e: &GramLattice, f: &GramLattice, cfg: &BostConfig) -> Result<CheckReport> {
    let p = e.direct_product(f);
    let (a, b, c) = (hm.sq(e, cfg)?, hm.sq(f, cfg)?, hm.sq(&p, cfg)?);
    let want = a.clone().min(b.clone());
    let mut r = CheckReport::new(format!("product law for {} x {}", e.name(), f.name()));
    r.push("H_min(E x F) = min", c == want, format!("{c} vs min({a}, {b})"));
    Ok(r)
}

/// Serializable summary of a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictSummary {
    pub equal: bool,
    pub lhs_reduced: String,
    pub rhs_reduced: String,
    pub violating_witness: Option<Vec<Vec<String>>>,
    pub certified: bool,
}

impl From<&MultiplicativityVerdict> for VerdictSummary {
    fn from(v: &MultiplicativityVerdict) -> Self {
        VerdictSummary {
            equal: v.equal,
            lhs_reduced: v.lhs_reduced().to_string(),
            rhs_reduced: v.rhs_reduced().to_string(),
            violating_witness: v
                .violating_witness
                .as_ref()
                .map(|w| w.basis().row_iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect()),
            certified: v.certified,
        }
    }
}
