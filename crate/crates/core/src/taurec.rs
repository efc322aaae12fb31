//! `τ`-linear operators acting on sequences of `u`-series, the operators
//! `L₁` and `L₂`, and symmetric powers of `2 × 2` matrices.

use crate::algebra::{lucas_binom, Field, ThetaTPoly};
use crate::error::{Error, Result};
use crate::forms::{t_minus_theta_qk, FormCatalog};
use crate::shadowed::g1k_shadowed;
use crate::useries::USeries;

/// `L = A_0 τ⁰ + ⋯ + A_s τ^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauOperator {
    coeffs: Vec<USeries>,
}

impl TauOperator {
    /// Trailing zero coefficients are dropped; `A_0` must be nonzero.
    pub fn new(mut coeffs: Vec<USeries>) -> Result<TauOperator> {
        while coeffs.last().is_some_and(USeries::is_zero) {
            coeffs.pop();
        }
        match coeffs.first() {
            Some(a0) if !a0.is_zero() => Ok(TauOperator { coeffs }),
            _ => Err(Error::OutOfRange("operator needs a nonzero A_0".into())),
        }
    }

    pub fn identity(field: &Field, prec: usize) -> TauOperator {
        TauOperator { coeffs: vec![USeries::one(field, prec)] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[USeries] {
        &self.coeffs
    }
}

/// Entries `G_k` for `k` in the window `[start, start + len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSequence {
    start: usize,
    entries: Vec<USeries>,
}

impl TauSequence {
    pub fn new(start: usize, entries: Vec<USeries>) -> Result<TauSequence> {
        if let Some(first) = entries.first() {
            if entries.iter().any(|e| e.field() != first.field()) {
                return Err(Error::FieldMismatch("sequence entries over different fields".into()));
            }
        }
        Ok(TauSequence { start, entries })
    }

    pub fn constant(value: &USeries, len: usize) -> TauSequence {
        TauSequence { start: 0, entries: vec![value.clone(); len] }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// One past the last index.
    pub fn end(&self) -> usize {
        self.start + self.entries.len()
    }

    pub fn entries(&self) -> &[USeries] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&USeries> {
        k.checked_sub(self.start).and_then(|i| self.entries.get(i))
    }

    /// Every entry vanishes modulo its own precision.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(USeries::is_zero)
    }

    /// Least precision over the entries.
    pub fn min_prec(&self) -> Option<usize> {
        self.entries.iter().map(USeries::prec).min()
    }
}

/// `(L G)_k = Σ_i A_i τ^i(G_{k-i})` for every `k` with `[k - s, k]` inside the window.
pub fn apply_operator(op: &TauOperator, seq: &TauSequence) -> Result<TauSequence> {
    let s = op.order();
    if seq.entries.len() <= s {
        return Err(Error::WindowTooShort(format!(
            "order {s} needs more than {} entries",
            seq.entries.len()
        )));
    }
    let cap = op.coeffs.iter().map(USeries::prec).max().unwrap_or(0);
    let mut out = Vec::new();
    for k in seq.start + s..seq.end() {
        let mut acc: Option<USeries> = None;
        for (i, a) in op.coeffs.iter().enumerate() {
            let g = seq.get(k - i).expect("index inside window");
            let term = a.mul(&g.tau_truncated(i as u32, cap))?;
            acc = Some(match acc {
                None => term,
                Some(x) => x.add(&term)?,
            });
        }
        out.push(acc.expect("operator has at least one coefficient"));
    }
    TauSequence::new(seq.start + s, out)
}

/// `L₁ = 1 - g τ - Δ(t - θ^q) τ²`.
pub fn operator_l1(cat: &FormCatalog) -> Result<TauOperator> {
    let f = cat.field();
    let b = cat.delta()?.scale(&t_minus_theta_qk(f, 1));
    TauOperator::new(vec![USeries::one(f, cat.prec()), cat.g()?.neg(), b.neg()])
}

/// `L₂ = 1 - g^{1-q} S τ - Δ(t - θ^q) S τ² + g^{1-q} Δ^{1+2q} (t - θ^q)(t - θ^{q²})² τ³`
/// with `S = g^{1+q} + Δ(t - θ^q)` and `g^{1-q} = g / g^q`.
pub fn operator_l2(cat: &FormCatalog) -> Result<TauOperator> {
    let f = cat.field();
    let prec = cat.prec();
    let q = cat.q() as u64;
    let g = cat.g()?;
    let delta = cat.delta()?;
    let g_q = g.pow(q)?.truncate(prec);
    let g_1mq = g.mul(&g_q.inv()?)?;
    let b = delta.scale(&t_minus_theta_qk(f, 1));
    let s = g.mul(&g_q)?.add(&b)?;
    let a1 = g_1mq.mul(&s)?.neg();
    let a2 = b.mul(&s)?.neg();
    let brackets = t_minus_theta_qk(f, 1).mul(&t_minus_theta_qk(f, 2).pow(2));
    let a3 = g_1mq
        .mul(&delta.pow(1 + 2 * q)?.truncate(prec))?
        .scale(&brackets);
    TauOperator::new(vec![USeries::one(f, prec), a1, a2, a3])
}

/// `G_{l,k} = (-1)^{l+1} G_{1,k}^l` for `0 ≤ k ≤ k_max`.
pub fn g_sequence(cat: &FormCatalog, l: u32, k_max: usize) -> Result<TauSequence> {
    if l == 0 || l > cat.q() {
        return Err(Error::OutOfRange(format!("l = {l} outside 1..={}", cat.q())));
    }
    let entries = (0..=k_max)
        .map(|k| {
            let p = g1k_shadowed(cat, k)?.pow(l as u64)?.truncate(cat.prec());
            Ok(if l.is_multiple_of(2) { p.neg() } else { p })
        })
        .collect::<Result<Vec<_>>>()?;
    TauSequence::new(0, entries)
}

pub type Matrix = Vec<Vec<ThetaTPoly>>;

/// `Sym^l` of `[[a, b], [c, d]]`, acting on homogeneous degree-`l` forms.
///
/// With `C_{m,i} = Σ_j C(i,j) C(l-i, m-j) a^j b^{i-j} c^{m-j} d^{l-m-i+j}`
/// (the coefficient of `X^m Y^{l-m}` in `(aX + bY)^i (cX + dY)^{l-i}`), entry
/// `(r, s)` is `C_{l-s, l-r}`. This orientation makes `l = 1` return the
/// matrix itself and `Sym^l(M) Sym^l(N) = Sym^l(MN)`.
pub fn sym_power_matrix(
    a: &ThetaTPoly,
    b: &ThetaTPoly,
    c: &ThetaTPoly,
    d: &ThetaTPoly,
    l: usize,
) -> Matrix {
    let f = a.field();
    let p = f.p();
    let pows = |x: &ThetaTPoly| -> Vec<ThetaTPoly> {
        let mut v = vec![ThetaTPoly::one(f)];
        for k in 0..l {
            let next = v[k].mul(x);
            v.push(next);
        }
        v
    };
    let (pa, pb, pc, pd) = (pows(a), pows(b), pows(c), pows(d));
    let entry = |m: usize, i: usize| -> ThetaTPoly {
        let mut acc = ThetaTPoly::zero(f);
        for j in 0..=i.min(m) {
            if m - j > l - i {
                continue;
            }
            let binom = lucas_binom(i as u64, j as u64, p) as u64 * lucas_binom((l - i) as u64, (m - j) as u64, p) as u64;
            let binom = f.from_int((binom % p as u64) as i64);
            if binom.is_zero() {
                continue;
            }
            let term = pa[j].mul(&pb[i - j]).mul(&pc[m - j]).mul(&pd[l - m - (i - j)]);
            acc = acc.add(&term.scale(binom));
        }
        acc
    };
    (0..=l)
        .map(|r| (0..=l).map(|s| entry(l - s, l - r)).collect())
        .collect()
}

pub fn matmul(x: &Matrix, y: &Matrix) -> Matrix {
    let f = x[0][0].field();
    let n = y.len();
    let cols = y[0].len();
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| ThetaTPoly::sum_of_products(f, (0..n).map(|k| (&row[k], &y[k][j]))))
                .collect()
        })
        .collect()
}

/// Determinant of a square matrix by expansion along rows, memoised over
/// the set of columns already used.
pub fn determinant(m: &Matrix) -> ThetaTPoly {
    let n = m.len();
    let f = m[0][0].field();
    let mut minors: Vec<Option<ThetaTPoly>> = vec![None; 1 << n];
    minors[0] = Some(ThetaTPoly::one(f));
    for mask in 0usize..1 << n {
        let Some(val) = minors[mask].clone() else { continue };
        if val.is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in (0..n).filter(|c| mask >> c & 1 == 0) {
            if m[row][col].is_zero() {
                continue;
            }
            // sign of the inversions created by placing `col` after the used columns
            let above = (mask >> col).count_ones();
            let mut term = val.mul(&m[row][col]);
            if above % 2 == 1 {
                term = term.neg();
            }
            let slot = &mut minors[mask | 1 << col];
            *slot = Some(match slot.take() {
                None => term,
                Some(x) => x.add(&term),
            });
        }
    }
    minors[(1 << n) - 1].clone().unwrap_or_else(|| ThetaTPoly::zero(f))
}

/// Checks `det Sym^l(M) = (ad - bc)^{(l² + l)/2}`.
pub fn sym_det_holds(a: &ThetaTPoly, b: &ThetaTPoly, c: &ThetaTPoly, d: &ThetaTPoly, l: usize) -> bool {
    let det = determinant(&sym_power_matrix(a, b, c, d, l));
    let base = a.mul(d).sub(&b.mul(c));
    det == base.pow(((l * l + l) / 2) as u64)
}
