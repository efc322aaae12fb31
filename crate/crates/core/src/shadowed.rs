//! Index-shadowed partitions and the closed form of `G_{1,k}`.
//!
//! A tuple `(S_1, …, S_r)` of subsets of `{0, …, n-1}` is a shadowed
//! partition when the translates `S_i + j` (`0 ≤ j < i`) tile `{0, …, n-1}`;
//! equivalently, `S_i` lists the start positions of the length-`i` tiles in a
//! tiling of a `1 × n` strip by tiles of length at most `r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{t_minus_theta_qk, FormCatalog};
use crate::useries::{sum_series, USeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ShadowedPartition {
    n: usize,
    /// `sets[i - 1] = S_i`, each sorted ascending.
    sets: Vec<Vec<usize>>,
}

impl ShadowedPartition {
    pub fn new(n: usize, mut sets: Vec<Vec<usize>>) -> Result<ShadowedPartition> {
        for s in &mut sets {
            s.sort_unstable();
        }
        let p = ShadowedPartition { n, sets };
        if !p.is_valid() {
            return Err(Error::OutOfRange(format!("{p:?} is not a shadowed partition")));
        }
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.sets.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S_i` for `1 ≤ i ≤ r`.
    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i - 1]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// The defining condition, checked literally.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.n];
        for (idx, s) in self.sets.iter().enumerate() {
            let i = idx + 1;
            if s.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            for &x in s {
                for j in 0..i {
                    match seen.get_mut(x + j) {
                        Some(slot) if !*slot => *slot = true,
                        _ => return false,
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Tile lengths read left to right.
    pub fn tile_lengths(&self) -> Vec<usize> {
        let mut starts: Vec<(usize, usize)> = self
            .sets
            .iter()
            .enumerate()
            .flat_map(|(idx, s)| s.iter().map(move |&x| (x, idx + 1)))
            .collect();
        starts.sort_unstable();
        starts.into_iter().map(|(_, len)| len).collect()
    }
}

/// `P_r(n)`, ordered lexicographically by tile-length sequence.
pub fn enumerate_shadowed(r: usize, n: usize) -> Vec<ShadowedPartition> {
    if r == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut sets = vec![Vec::new(); r];
    place(r, n, 0, &mut sets, &mut out);
    out
}

fn place(r: usize, n: usize, pos: usize, sets: &mut Vec<Vec<usize>>, out: &mut Vec<ShadowedPartition>) {
    if pos == n {
        out.push(ShadowedPartition { n, sets: sets.clone() });
        return;
    }
    for len in 1..=r.min(n - pos) {
        sets[len - 1].push(pos);
        place(r, n, pos + len, sets, out);
        sets[len - 1].pop();
    }
}

/// `G_{1,k} = -Σ_{P_2(k)} Π_{j∈S_1} τ^j(g) · Π_{i∈S_2} (t - θ^{q^{i+1}}) τ^i(Δ)`,
/// with `G_{1,0} = -1`.
pub fn g1k_shadowed(cat: &FormCatalog, k: usize) -> Result<USeries> {
    let f = cat.field();
    let prec = cat.prec();
    if k == 0 {
        return Ok(USeries::one(f, prec).neg());
    }
    let g = cat.g()?;
    let delta = cat.delta()?;
    let g_tw: Vec<USeries> = (0..k).map(|j| g.tau_truncated(j as u32, prec)).collect();
    let d_tw: Vec<USeries> = (0..k)
        .map(|i| {
            delta
                .tau_truncated(i as u32, prec)
                .scale(&t_minus_theta_qk(f, i as u32 + 1))
        })
        .collect();
    let mut terms = Vec::new();
    for part in enumerate_shadowed(2, k) {
        let mut prod = USeries::one(f, prec);
        for &j in part.set(1) {
            prod = prod.mul(&g_tw[j])?;
        }
        for &i in part.set(2) {
            prod = prod.mul(&d_tw[i])?;
        }
        terms.push(prod.truncate(prec));
    }
    Ok(sum_series(f, prec, terms.iter()).neg())
}

/// `G_{1,0..=k_max}` from `G_{1,k} = g τ(G_{1,k-1}) + Δ(t - θ^q) τ²(G_{1,k-2})`.
pub fn g1k_recurrence(cat: &FormCatalog, k_max: usize) -> Result<Vec<USeries>> {
    let f = cat.field();
    let prec = cat.prec();
    let g = cat.g()?;
    let b = cat.delta()?.scale(&t_minus_theta_qk(f, 1));
    let mut out = vec![USeries::one(f, prec).neg(), g.neg()];
    for k in 2..=k_max {
        let next = g
            .mul(&out[k - 1].tau_truncated(1, prec))?
            .add(&b.mul(&out[k - 2].tau_truncated(2, prec))?)?
            .truncate(prec);
        out.push(next);
    }
    out.truncate(k_max + 1);
    Ok(out)
}

/// `q^{k-1}(q-1)`, the valuation guaranteed for `d₂ + G_{1,k}`.
pub fn d2_approx_bound(q: u32, k: usize) -> usize {
    (q as usize).pow(k as u32 - 1) * (q as usize - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D2ApproxReport {
    pub k: usize,
    pub bound: usize,
    /// Valuation of `d₂ + G_{1,k}` (capped at the working precision).
    pub valuation: usize,
    pub holds: bool,
}

pub fn check_d2_approx(cat: &FormCatalog, k: usize) -> Result<D2ApproxReport> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let bound = d2_approx_bound(cat.q(), k);
    if cat.prec() <= bound {
        return Err(Error::PrecisionUnderflow(format!(
            "precision {} cannot certify valuation {bound}",
            cat.prec()
        )));
    }
    let diff = cat.d2()?.add(&g1k_shadowed(cat, k)?)?;
    let valuation = diff.valuation();
    Ok(D2ApproxReport { k, bound, valuation, holds: valuation >= bound })
}

/// `d₂ mod u^prec` as `-G_{1,k}` for the least `k` whose bound reaches `prec`.
pub fn d2_from_shadowed(cat: &FormCatalog) -> Result<USeries> {
    let mut k = 1;
    while d2_approx_bound(cat.q(), k) < cat.prec() {
        k += 1;
    }
    Ok(g1k_shadowed(cat, k)?.neg())
}
