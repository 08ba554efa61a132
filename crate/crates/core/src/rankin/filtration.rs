use std::cmp::Ordering;

use super::search::{search_rank, RankSearch};
use super::SearchConfig;
use crate::error::{Error, Result};
use crate::exact::hnf::express_in;
use crate::exact::{ExactPosReal, IntMatrix, Rat};
use crate::lattice::{GramLattice, Quotient, SqHeight, Sublattice};

/// Minimal reduced height, every sublattice attaining it, and the
/// destabilizing sublattice (saturated sum of all of them).
#[derive(Clone, Debug)]
pub struct MinFlag {
    pub h_min: SqHeight,
    pub minimizers: Vec<Sublattice>,
    pub destabilizer: Sublattice,
    pub certified: bool,
}

impl MinFlag {
    /// `H_min^2` itself (the squared reduced height).
    pub fn reduced(&self) -> ExactPosReal {
        self.h_min.reduced()
    }
}

/// Per-rank minima `d_k` with all witnesses.
#[derive(Clone, Debug)]
pub struct RankinProfile {
    pub entries: Vec<RankSearch>,
}

impl RankinProfile {
    pub fn d(&self, k: usize) -> Option<&Rat> {
        self.entries.iter().find(|e| e.rank == k).and_then(|e| e.min.as_ref())
    }

    pub fn certified(&self) -> bool {
        self.entries.iter().all(|e| e.certified)
    }
}

pub fn rankin_min(l: &GramLattice, k: usize, cfg: &SearchConfig) -> Result<RankSearch> {
    search_rank(l, k, None, cfg)
}

pub fn rankin_profile(l: &GramLattice, max_rank: Option<usize>, cfg: &SearchConfig) -> Result<RankinProfile> {
    let top = max_rank.unwrap_or(l.rank()).min(l.rank());
    let entries = (1..=top).map(|k| rankin_min(l, k, cfg)).collect::<Result<_>>()?;
    Ok(RankinProfile { entries })
}

pub fn h_min(l: &GramLattice, cfg: &SearchConfig) -> Result<MinFlag> {
    let n = l.rank();
    let mut h = l.sq_height().reduced();
    let mut per_rank: Vec<(ExactPosReal, RankSearch)> = Vec::new();
    let mut certified = true;
    for k in 1..n {
        let cap = h.powi(k as i64);
        let r = search_rank(l, k, Some(&cap), cfg)?;
        certified &= r.certified;
        if let Some(d) = &r.min {
            let red = ExactPosReal::from_rat(d)?.pow(&Rat::new(1.into(), (k as i64).into()));
            if red < h {
                h = red.clone();
            }
            per_rank.push((red, r));
        }
    }
    let mut minimizers: Vec<Sublattice> = per_rank
        .into_iter()
        .filter(|(red, _)| *red == h)
        .flat_map(|(_, r)| r.minimizers)
        .collect();
    if l.sq_height().reduced() == h {
        minimizers.push(l.full());
    }
    let mut destabilizer = minimizers[0].clone();
    for m in &minimizers[1..] {
        destabilizer = destabilizer.sum(m);
    }
    if destabilizer.sq_height().reduced() != h {
        return Err(Error::Invariant(format!(
            "sum of minimizers has H_r^2 = {} but H_min^2 = {h}",
            destabilizer.sq_height().reduced()
        )));
    }
    for m in &minimizers {
        if !destabilizer.contains(m) {
            return Err(Error::Invariant("minimizer outside the destabilizer".into()));
        }
    }
    Ok(MinFlag { h_min: destabilizer.sq_height(), minimizers, destabilizer, certified })
}

/// The slope filtration `0 = E_0 < E_1 < ... < E_l = E`.
#[derive(Clone, Debug)]
pub struct Filtration {
    /// `E_1, ..., E_l`; the last one is the whole lattice.
    pub steps: Vec<Sublattice>,
    /// Squared heights of `E_i / E_{i-1}`.
    pub quotient_heights: Vec<SqHeight>,
    pub certified: bool,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether only the trivial step is present.
    pub fn is_semistable(&self) -> bool {
        self.steps.len() == 1
    }

    pub fn lattice(&self) -> &GramLattice {
        self.steps[0].ambient()
    }

    /// Vertices `(dim E_i, H(E_i)^2)`, starting at `(0, 1)`.
    pub fn polygon(&self) -> Vec<(usize, ExactPosReal)> {
        let mut out = vec![(0, ExactPosReal::one())];
        out.extend(self.steps.iter().map(|s| (s.rank(), s.sq_height().value)));
        out
    }

    /// The trivial filtration of a lattice known to be semistable.
    pub fn trivial(l: &GramLattice) -> Self {
        Filtration { steps: vec![l.full()], quotient_heights: vec![l.sq_height()], certified: true }
    }
}

pub fn gs_filtration(l: &GramLattice, cfg: &SearchConfig) -> Result<Filtration> {
    let n = l.rank();
    let first = h_min(l, cfg)?;
    let mut certified = first.certified;
    let mut steps = vec![first.destabilizer];
    while steps.last().expect("nonempty").rank() < n {
        let prev = steps.last().expect("nonempty").clone();
        let q = Quotient::new(l, &prev)?;
        let flag = h_min(q.lattice(), cfg)?;
        certified &= flag.certified;
        steps.push(q.lift(&flag.destabilizer)?);
    }
    let quotient_heights = quotient_heights(&steps);
    let f = Filtration { steps, quotient_heights, certified };
    check_structure(&f)?;
    Ok(f)
}

fn quotient_heights(steps: &[Sublattice]) -> Vec<SqHeight> {
    let mut out = Vec::with_capacity(steps.len());
    let mut prev = SqHeight::zero_space();
    for s in steps {
        let h = s.sq_height();
        out.push(h.div(&prev));
        prev = h;
    }
    out
}

/// Strict inclusions and strictly increasing quotient reduced heights.
fn check_structure(f: &Filtration) -> Result<()> {
    for w in f.steps.windows(2) {
        if w[0].rank() >= w[1].rank() || !w[1].contains(&w[0]) {
            return Err(Error::Invariant("filtration steps are not strictly nested".into()));
        }
    }
    for w in f.quotient_heights.windows(2) {
        if w[0].cmp_reduced(&w[1]) != Ordering::Less {
            return Err(Error::Invariant(
                "quotient reduced heights are not strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// `B / A` as a lattice, for saturated `A < B` in the same ambient lattice.
pub fn subquotient(a: Option<&Sublattice>, b: &Sublattice) -> Result<GramLattice> {
    let bl = b.as_lattice();
    let Some(a) = a else { return Ok(bl) };
    let coords = express_in(b.basis(), a.basis())
        .ok_or_else(|| Error::Invariant("step is not contained in the next step".into()))?;
    if a.rank() == b.rank() {
        return Err(Error::Dimension("subquotient of equal ranks".into()));
    }
    let inner = Sublattice::new(&bl, &coords)?;
    Ok(Quotient::new(&bl, &inner)?.lattice().clone())
}

/// Independent re-check of the two defining properties: each quotient
/// `E_i/E_{i-1}` is semistable, and quotient reduced heights strictly
/// increase. Returns one pass flag per quotient.
#[derive(Clone, Debug)]
pub struct FiltrationCheck {
    pub nested: bool,
    pub semistable_quotients: Vec<bool>,
    pub increasing: bool,
}

impl FiltrationCheck {
    pub fn passed(&self) -> bool {
        self.nested && self.increasing && self.semistable_quotients.iter().all(|&b| b)
    }
}

pub fn validate_filtration(f: &Filtration, cfg: &SearchConfig) -> Result<FiltrationCheck> {
    let nested = f.steps.last().is_some_and(|s| s.is_full())
        && f.steps
            .windows(2)
            .all(|w| w[0].rank() < w[1].rank() && w[1].contains(&w[0]));
    let heights = quotient_heights(&f.steps);
    let increasing = heights == f.quotient_heights
        && heights.windows(2).all(|w| w[0].cmp_reduced(&w[1]) == Ordering::Less);
    let mut semistable_quotients = Vec::new();
    let mut prev: Option<&Sublattice> = None;
    for s in &f.steps {
        let q = subquotient(prev, s)?;
        semistable_quotients.push(is_semistable(&q, cfg)?);
        prev = Some(s);
    }
    Ok(FiltrationCheck { nested, semistable_quotients, increasing })
}

pub fn canonical_polygon(l: &GramLattice, cfg: &SearchConfig) -> Result<Vec<(usize, ExactPosReal)>> {
    Ok(gs_filtration(l, cfg)?.polygon())
}

pub fn is_semistable(l: &GramLattice, cfg: &SearchConfig) -> Result<bool> {
    Ok(h_min(l, cfg)?.destabilizer.is_full())
}

/// Semistable with no proper sublattice tying the reduced height of `L`.
pub fn is_stable(l: &GramLattice, cfg: &SearchConfig) -> Result<bool> {
    if l.rank() == 1 {
        return Ok(true);
    }
    let flag = h_min(l, cfg)?;
    Ok(flag.destabilizer.is_full() && flag.minimizers.iter().all(|m| m.is_full()))
}

/// Re-express a sublattice given by generator rows.
pub fn sub_from_rows(l: &GramLattice, rows: &[Vec<i64>]) -> Result<Sublattice> {
    let data: Vec<i64> = rows.iter().flatten().copied().collect();
    l.sublattice(&IntMatrix::from_i64(rows.len(), l.rank(), &data))
}
