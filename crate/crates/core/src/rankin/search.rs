//! Minimal-determinant sublattices of a fixed rank.
//!
//! A minimizing saturated `F` of rank `k` with `det F <= D` contains
//! vectors `v_1..v_k` realising its successive minima, and Minkowski's
//! second theorem gives `prod N(v_i) <= gamma * det F` with
//! `gamma = (4/3)^(k(k-1)/2)` (from Hermite's bound on `gamma_k^k`). Since
//! `N(v_i) >= lambda_1(L)`, every `v_i` has norm at most
//! `gamma * D / lambda_1^(k-1)`, and `F` is the saturation of their span.
//! The search walks norm-sorted tuples under that product bound.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::enumerate::{det_small, min_norm, saturation_index_small, short_vectors, Echelon, IntForm, ShortVector};
use super::SearchConfig;
use crate::error::{Error, Result};
use crate::exact::hnf::saturate;
use crate::exact::{ExactPosReal, IntMatrix, Rat};
use crate::lattice::{GramLattice, Sublattice};

const SLACK: f64 = 1e-9;

/// Outcome of a rank-`k` search.
#[derive(Clone, Debug)]
pub struct RankSearch {
    pub rank: usize,
    /// `d_k`, or `None` when a cap was given and nothing fits under it.
    pub min: Option<Rat>,
    /// Every saturated rank-`k` sublattice attaining `min`, sorted.
    pub minimizers: Vec<Sublattice>,
    /// Norm bound used for generator vectors.
    pub radius: Rat,
    pub certified: bool,
}

/// `(4/3)^(k(k-1)/2)`.
pub fn gamma_bound(k: usize) -> Rat {
    num_traits::pow(Rat::new(4.into(), 3.into()), k * k.saturating_sub(1) / 2)
}

/// Minimum determinant over saturated rank-`k` sublattices. With `cap`,
/// only sublattices with `det F <= cap` are considered.
pub fn search_rank(
    l: &GramLattice,
    k: usize,
    cap: Option<&ExactPosReal>,
    cfg: &SearchConfig,
) -> Result<RankSearch> {
    let n = l.rank();
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("rank {k} out of range 1..={n}")));
    }
    if k == n {
        let ok = cap.map_or(true, |c| c.cmp_rat(l.det()) != Ordering::Less);
        return Ok(RankSearch {
            rank: k,
            min: ok.then(|| l.det().clone()),
            minimizers: if ok { vec![l.full()] } else { Vec::new() },
            radius: Rat::from_integer(0.into()),
            certified: true,
        });
    }
    if 2 * k > n {
        return search_dual(l, k, cap, cfg);
    }
    if k == 1 {
        return search_rank_one(l, cap, cfg);
    }
    search_tuples(l, k, cap, cfg)
}

/// `d_k(L) = det(L) * d_{n-k}(L^dual)`, with minimizers mapped by `perp`.
fn search_dual(l: &GramLattice, k: usize, cap: Option<&ExactPosReal>, cfg: &SearchConfig) -> Result<RankSearch> {
    let dual = l.dual();
    let det = ExactPosReal::from_rat(l.det())?;
    let cap2 = cap.map(|c| c.div(&det));
    let r = search_rank(&dual, l.rank() - k, cap2.as_ref(), cfg)?;
    let mut minimizers = Vec::with_capacity(r.minimizers.len());
    for f in &r.minimizers {
        minimizers.push(f.perp()?.rehome(l));
    }
    minimizers.sort_by(|a, b| a.basis().as_slice().cmp(b.basis().as_slice()));
    Ok(RankSearch {
        rank: k,
        min: r.min.map(|d| d * l.det()),
        minimizers,
        radius: r.radius,
        certified: r.certified,
    })
}

fn search_rank_one(l: &GramLattice, cap: Option<&ExactPosReal>, cfg: &SearchConfig) -> Result<RankSearch> {
    let lam = min_norm(l)?;
    if let Some(c) = cap {
        if c.cmp_rat(&lam) == Ordering::Less {
            return Ok(RankSearch {
                rank: 1,
                min: None,
                minimizers: Vec::new(),
                radius: lam,
                certified: true,
            });
        }
    }
    let vs = super::enumerate::short_vectors_limited(l, &lam, cfg.budget_nodes)?;
    let minimizers = sorted_unique(
        l,
        vs.iter().map(|v| IntMatrix::from_rows(&[v.to_bigint()], l.rank())),
    );
    Ok(RankSearch {
        rank: 1,
        min: Some(lam.clone()),
        minimizers,
        radius: lam,
        certified: true,
    })
}

fn sorted_unique(l: &GramLattice, gens: impl Iterator<Item = IntMatrix>) -> Vec<Sublattice> {
    let mut seen = BTreeMap::new();
    for g in gens {
        let b = saturate(&g);
        seen.entry(b.as_slice().to_vec()).or_insert(b);
    }
    seen.into_values()
        .map(|b| Sublattice::from_basis(l, b))
        .collect()
}

struct Ctx<'a> {
    k: usize,
    form: &'a IntForm,
    vecs: &'a [ShortVector],
    nf: Vec<f64>,
    gamma: f64,
    cap: Option<&'a ExactPosReal>,
    den_k: BigInt,
    nodes: &'a AtomicU64,
    budget: u64,
}

struct Branch {
    d: Rat,
    d_f: f64,
    cands: Vec<Vec<usize>>,
    local_nodes: u64,
}

fn search_tuples(l: &GramLattice, k: usize, cap: Option<&ExactPosReal>, cfg: &SearchConfig) -> Result<RankSearch> {
    let n = l.rank();
    let form = IntForm::new(l.gram())?;
    let lam = min_norm(l)?;

    // starting point: the first k vectors of an LLL basis
    let red = crate::exact::lll::lll_gram(l.gram());
    let rows: Vec<Vec<BigInt>> = red.transform.to_rows()[..k].to_vec();
    let init = Sublattice::from_basis(l, saturate(&IntMatrix::from_rows(&rows, n)));
    let init_ok = cap.map_or(true, |c| c.cmp_rat(init.det()) != Ordering::Less);
    let d0 = match cap {
        Some(c) if !init_ok => c.rat_upper(),
        _ => init.det().clone(),
    };

    let gamma = gamma_bound(k);
    let (radius, certified) = match &cfg.radius_override {
        Some(r) => (r.clone(), false),
        None => (&gamma * &d0 / num_traits::pow(lam.clone(), k - 1), true),
    };
    let vecs = short_vectors(l, &radius)?;
    let den_f = form.den as f64;
    let ctx = Ctx {
        k,
        form: &form,
        vecs: &vecs,
        nf: vecs.iter().map(|v| v.norm_num as f64 / den_f).collect(),
        gamma: super::enumerate::rat_f64(&gamma),
        cap,
        den_k: num_traits::pow(BigInt::from(form.den), k),
        nodes: &AtomicU64::new(0),
        budget: cfg.budget_nodes,
    };
    let d0_f = super::enumerate::rat_f64(&d0);

    let branches: Vec<Result<Branch>> = (0..vecs.len())
        .into_par_iter()
        .filter(|&i| ctx.nf[i].powi(k as i32) <= ctx.gamma * d0_f * (1.0 + SLACK))
        .map(|i| {
            let mut br = Branch { d: d0.clone(), d_f: d0_f, cands: Vec::new(), local_nodes: 0 };
            let mut ech = Echelon::default();
            ech.push(&vecs[i].coords);
            let mut chosen = vec![i];
            dfs(&ctx, &mut br, &mut chosen, &mut ech, ctx.nf[i])?;
            ctx.nodes.fetch_add(br.local_nodes, AtomicOrdering::Relaxed);
            Ok(br)
        })
        .collect();

    let mut best: Option<Rat> = init_ok.then(|| init.det().clone());
    let mut found: Vec<(Rat, Vec<usize>)> = Vec::new();
    for br in branches {
        let br = br?;
        for c in br.cands {
            found.push((br.d.clone(), c));
        }
    }
    for (d, _) in &found {
        if best.as_ref().map_or(true, |b| d < b) {
            best = Some(d.clone());
        }
    }
    let Some(min) = best else {
        return Ok(RankSearch { rank: k, min: None, minimizers: Vec::new(), radius, certified });
    };
    let mut gens: Vec<IntMatrix> = found
        .iter()
        .filter(|(d, _)| *d == min)
        .map(|(_, c)| {
            let rows: Vec<Vec<BigInt>> = c.iter().map(|&i| vecs[i].to_bigint()).collect();
            IntMatrix::from_rows(&rows, n)
        })
        .collect();
    if init.det() == &min {
        gens.push(init.basis().clone());
    }
    let minimizers = sorted_unique(l, gens.into_iter());
    for m in &minimizers {
        if m.det() != &min {
            return Err(Error::Invariant(format!(
                "rank-{k} candidate saturates to det {} instead of {min}",
                m.det()
            )));
        }
    }
    Ok(RankSearch { rank: k, min: Some(min), minimizers, radius, certified })
}

fn dfs(ctx: &Ctx, br: &mut Branch, chosen: &mut Vec<usize>, ech: &mut Echelon, prod: f64) -> Result<()> {
    let j = chosen.len();
    if j == ctx.k {
        return leaf(ctx, br, chosen);
    }
    let m = (ctx.k - j) as i32;
    let start = chosen[j - 1] + 1;
    for i in start..ctx.vecs.len() {
        let bound = ctx.gamma * br.d_f * (1.0 + SLACK);
        if prod * ctx.nf[i].powi(m) > bound {
            break;
        }
        br.local_nodes += 1;
        if br.local_nodes % 4096 == 0 {
            let total = ctx.nodes.fetch_add(4096, AtomicOrdering::Relaxed) + 4096;
            br.local_nodes -= 4096;
            if total > ctx.budget {
                return Err(Error::Budget { nodes: ctx.budget });
            }
        }
        if !ech.push(&ctx.vecs[i].coords) {
            continue;
        }
        chosen.push(i);
        let r = dfs(ctx, br, chosen, ech, prod * ctx.nf[i]);
        chosen.pop();
        ech.pop();
        r?;
    }
    Ok(())
}

fn leaf(ctx: &Ctx, br: &mut Branch, chosen: &[usize]) -> Result<()> {
    let k = ctx.k;
    let mut g = vec![vec![0i128; k]; k];
    for a in 0..k {
        for b in a..k {
            let x = if a == b {
                ctx.vecs[chosen[a]].norm_num
            } else {
                ctx.form.dot(&ctx.vecs[chosen[a]].coords, &ctx.vecs[chosen[b]].coords)?
            };
            g[a][b] = x;
            g[b][a] = x;
        }
    }
    let det_num: BigInt = match det_small(&g) {
        Some(d) => BigInt::from(d),
        None => super::enumerate::bigint_det(&g),
    };
    let rows: Vec<&[i64]> = chosen.iter().map(|&i| ctx.vecs[i].coords.as_slice()).collect();
    let idx: BigInt = match saturation_index_small(&rows) {
        Some(i) => BigInt::from(i),
        None => {
            let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            crate::exact::hnf::saturation_index(&IntMatrix::from_rows(&big, ctx.form.n))
        }
    };
    let den = &ctx.den_k * &idx * &idx;
    let df = det_num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY);
    if df.is_finite() && df > br.d_f * (1.0 + SLACK) {
        return Ok(());
    }
    let det = Rat::new(det_num, den);
    if det > br.d {
        return Ok(());
    }
    if let Some(c) = ctx.cap {
        if c.cmp_rat(&det) == Ordering::Less {
            return Ok(());
        }
    }
    if det < br.d {
        br.d_f = super::enumerate::rat_f64(&det);
        br.d = det;
        br.cands.clear();
    }
    br.cands.push(chosen.to_vec());
    Ok(())
}

