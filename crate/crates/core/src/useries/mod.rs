//! Truncated power series in `u` over `F_q[θ, t]`.
//!
//! A [`USeries`] is known modulo `u^prec`. Every operation computes the
//! exact precision its output is guaranteed to, so mixing τ-images (which
//! multiply precision by `q^k`) with ordinary products never manufactures
//! coefficients that the inputs do not determine.

pub(crate) mod carlitz;

pub use carlitz::{carlitz_phi, u_c_expansion, CarlitzOperator};

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{Field, Fq, ThetaTPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct USeries {
    field: Field,
    prec: usize,
    /// Sorted by exponent, no zero coefficients, all exponents `< prec`.
    terms: Vec<(usize, ThetaTPoly)>,
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in &self.terms {
            write!(f, "({c:?})u^{n} + ")?;
        }
        write!(f, "O(u^{})", self.prec)
    }
}

fn underflow(what: &str) -> Error {
    Error::PrecisionUnderflow(format!("{what} has no known coefficients"))
}

impl USeries {
    pub fn zero(field: &Field, prec: usize) -> USeries {
        USeries { field: field.clone(), prec, terms: Vec::new() }
    }

    pub fn one(field: &Field, prec: usize) -> USeries {
        Self::constant(ThetaTPoly::one(field), prec)
    }

    pub fn constant(c: ThetaTPoly, prec: usize) -> USeries {
        Self::monomial(c, 0, prec)
    }

    /// `c u^n mod u^prec`.
    pub fn monomial(c: ThetaTPoly, n: usize, prec: usize) -> USeries {
        let field = c.field().clone();
        let terms = if c.is_zero() || n >= prec { Vec::new() } else { vec![(n, c)] };
        USeries { field, prec, terms }
    }

    /// The uniformizer `u` itself.
    pub fn u(field: &Field, prec: usize) -> USeries {
        Self::monomial(ThetaTPoly::one(field), 1, prec)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs; exponents at
    /// or beyond `prec` are dropped and repeated exponents summed.
    pub fn from_terms<I>(field: &Field, prec: usize, terms: I) -> USeries
    where
        I: IntoIterator<Item = (usize, ThetaTPoly)>,
    {
        let mut t: Vec<(usize, ThetaTPoly)> = terms.into_iter().filter(|(n, _)| *n < prec).collect();
        t.sort_by_key(|(n, _)| *n);
        let mut merged: Vec<(usize, ThetaTPoly)> = Vec::with_capacity(t.len());
        for (n, c) in t {
            assert!(c.field() == field, "coefficient over a different field");
            match merged.last_mut() {
                Some((ln, lc)) if *ln == n => *lc = lc.add(&c),
                _ => merged.push((n, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        USeries { field: field.clone(), prec, terms: merged }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Exclusive truncation order: the series is known modulo `u^prec`.
    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> &[(usize, ThetaTPoly)] {
        &self.terms
    }

    /// Coefficient of `u^n`; `None` when `n` is beyond the known precision.
    pub fn coeff(&self, n: usize) -> Option<ThetaTPoly> {
        if n >= self.prec {
            return None;
        }
        Some(match self.terms.binary_search_by_key(&n, |(k, _)| *k) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => ThetaTPoly::zero(&self.field),
        })
    }

    /// `u`-adic valuation; equals `prec` when the series is zero to
    /// precision.
    pub fn valuation(&self) -> usize {
        self.terms.first().map_or(self.prec, |(n, _)| *n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, prec: usize) -> USeries {
        if prec >= self.prec {
            return self.clone();
        }
        USeries {
            field: self.field.clone(),
            prec,
            terms: self.terms.iter().filter(|(n, _)| *n < prec).cloned().collect(),
        }
    }

    fn check_field(&self, other: &USeries) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &USeries) -> Result<USeries> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        if prec == 0 {
            return Err(underflow("sum"));
        }
        let merged = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .filter(|(n, _)| *n < prec)
            .cloned();
        Ok(Self::from_terms(&self.field, prec, merged))
    }

    pub fn neg(&self) -> USeries {
        USeries {
            field: self.field.clone(),
            prec: self.prec,
            terms: self.terms.iter().map(|(n, c)| (*n, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &USeries) -> Result<USeries> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by `c`; precision unchanged.
    pub fn scale(&self, c: &ThetaTPoly) -> USeries {
        USeries {
            field: self.field.clone(),
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (*n, a.mul(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn scale_fq(&self, c: Fq) -> USeries {
        self.scale(&ThetaTPoly::constant(&self.field, c))
    }

    /// Product, with precision `min(prec f + val g, prec g + val f)`.
    pub fn mul(&self, other: &USeries) -> Result<USeries> {
        self.check_field(other)?;
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation());
        if prec == 0 {
            return Err(underflow("product"));
        }
        let mut contributions: Vec<(usize, u32, u32)> = Vec::new();
        for (x, (i, _)) in self.terms.iter().enumerate() {
            for (y, (j, _)) in other.terms.iter().enumerate() {
                if i + j >= prec {
                    break;
                }
                contributions.push((i + j, x as u32, y as u32));
            }
        }
        contributions.sort_unstable();
        let groups: Vec<&[(usize, u32, u32)]> =
            contributions.chunk_by(|a, b| a.0 == b.0).collect();
        let terms: Vec<(usize, ThetaTPoly)> = groups
            .into_par_iter()
            .map(|group| {
                let c = ThetaTPoly::sum_of_products(
                    &self.field,
                    group
                        .iter()
                        .map(|&(_, x, y)| (&self.terms[x as usize].1, &other.terms[y as usize].1)),
                );
                (group[0].0, c)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(USeries { field: self.field.clone(), prec, terms })
    }

    /// `f^p`: coefficientwise Frobenius, exponents and precision scaled by `p`.
    pub fn frobenius_p(&self) -> USeries {
        let p = self.field.p() as usize;
        USeries {
            field: self.field.clone(),
            prec: self.prec.saturating_mul(p),
            terms: self.terms.iter().map(|(n, c)| (n * p, c.frobenius_p())).collect(),
        }
    }

    /// `f^k`, splitting `k` into base-`p` digits so that `p`-th powers are
    /// exact Frobenius images.
    pub fn pow(&self, k: u64) -> Result<USeries> {
        if self.prec == 0 {
            return Err(underflow("power base"));
        }
        if k == 0 {
            return Ok(Self::one(&self.field, self.prec));
        }
        let p = self.field.p() as u64;
        let mut acc: Option<USeries> = None;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            for _ in 0..(k % p) {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            k /= p;
            if k > 0 {
                base = base.frobenius_p();
            }
        }
        Ok(acc.expect("k > 0"))
    }

    /// Inverse of a series whose constant term is a nonzero element of `F_q`.
    pub fn inv(&self) -> Result<USeries> {
        if self.prec == 0 {
            return Err(underflow("inverse argument"));
        }
        let c0 = self.coeff(0).expect("prec > 0");
        let c0 = match c0.as_constant() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(Error::NonUnit(format!("{c0:?}"))),
        };
        let f = &self.field;
        let c0_inv = f.inv(c0).expect("nonzero");
        let minus_inv = ThetaTPoly::constant(f, f.neg(c0_inv));
        let higher: Vec<&(usize, ThetaTPoly)> = self.terms.iter().filter(|(n, _)| *n > 0).collect();
        let mut out: Vec<Option<ThetaTPoly>> = vec![None; self.prec];
        out[0] = Some(ThetaTPoly::constant(f, c0_inv));
        for n in 1..self.prec {
            let pairs: Vec<(&ThetaTPoly, &ThetaTPoly)> = higher
                .iter()
                .take_while(|(k, _)| *k <= n)
                .filter_map(|(k, a)| out[n - k].as_ref().map(|b| (a, b)))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let s = ThetaTPoly::sum_of_products(f, pairs).mul(&minus_inv);
            if !s.is_zero() {
                out[n] = Some(s);
            }
        }
        Ok(USeries {
            field: f.clone(),
            prec: self.prec,
            terms: out.into_iter().enumerate().filter_map(|(n, c)| c.map(|c| (n, c))).collect(),
        })
    }

    /// `τ^k`: `Σ a_n u^n -> Σ τ^k(a_n) u^{n q^k}`, precision `prec · q^k`.
    pub fn tau(&self, k: u32) -> USeries {
        if k == 0 {
            return self.clone();
        }
        let step = (self.field.q() as usize).pow(k);
        USeries {
            field: self.field.clone(),
            prec: self.prec.saturating_mul(step),
            terms: self.terms.iter().map(|(n, c)| (n * step, c.tau(k))).collect(),
        }
    }

    /// `τ^k` truncated to `cap`, skipping coefficients that would be dropped.
    pub fn tau_truncated(&self, k: u32, cap: usize) -> USeries {
        let step = (self.field.q() as usize).pow(k);
        USeries {
            field: self.field.clone(),
            prec: self.prec.saturating_mul(step).min(cap),
            terms: self
                .terms
                .iter()
                .take_while(|(n, _)| n * step < cap)
                .map(|(n, c)| (n * step, c.tau(k)))
                .collect(),
        }
    }

    /// Multiplication by `u^k`.
    pub fn shift_up(&self, k: usize) -> USeries {
        USeries {
            field: self.field.clone(),
            prec: self.prec + k,
            terms: self.terms.iter().map(|(n, c)| (n + k, c.clone())).collect(),
        }
    }

    /// Exact division by `u^k`.
    pub fn shift_down(&self, k: usize) -> Result<USeries> {
        if self.prec <= k {
            return Err(Error::PrecisionUnderflow(format!(
                "dividing a series known mod u^{} by u^{k}",
                self.prec
            )));
        }
        if self.valuation() < k {
            return Err(Error::InexactDivision(format!(
                "series of valuation {} by u^{k}",
                self.valuation()
            )));
        }
        Ok(USeries {
            field: self.field.clone(),
            prec: self.prec - k,
            terms: self.terms.iter().map(|(n, c)| (n - k, c.clone())).collect(),
        })
    }

    /// Specialization `t -> θ` of every coefficient.
    pub fn subst_t_theta(&self) -> USeries {
        Self::from_terms(
            &self.field,
            self.prec,
            self.terms.iter().map(|(n, c)| (*n, c.subst_t_theta())),
        )
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_t_free())
    }

    /// Largest t-degree among the coefficients.
    pub fn max_t_degree(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(_, c)| c.degree_t()).max()
    }

    /// First exponent below the common precision where the two series
    /// differ, or `None` if they agree there.
    pub fn first_difference(&self, other: &USeries) -> Option<usize> {
        let prec = self.prec.min(other.prec);
        let mut a = self.terms.iter().take_while(|(n, _)| *n < prec).peekable();
        let mut b = other.terms.iter().take_while(|(n, _)| *n < prec).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return None,
                (Some((n, _)), None) | (None, Some((n, _))) => return Some(*n),
                (Some((n, x)), Some((m, y))) => {
                    if n != m {
                        return Some(*n.min(m));
                    }
                    if x != y {
                        return Some(*n);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    /// Equality modulo `u^min(prec)`.
    pub fn agrees_with(&self, other: &USeries) -> bool {
        self.first_difference(other).is_none()
    }
}

/// Sum of series, with the minimum precision of the inputs.
pub fn sum_series<'a, I>(field: &Field, prec: usize, items: I) -> USeries
where
    I: IntoIterator<Item = &'a USeries>,
{
    let mut prec = prec;
    let mut all = Vec::new();
    for s in items {
        prec = prec.min(s.prec);
        all.extend(s.terms.iter().cloned());
    }
    USeries::from_terms(field, prec, all)
}
