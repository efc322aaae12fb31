//! `u`-expansions of `g`, `h`, `Δ`, `E`, `d₂`, `𝔼`, `f_{l,ν}`, `f_s`, and
//! the identities relating their powers.
//!
//! Every `Σ_{c ∈ A_+}` is cut off at the last degree that can contribute
//! modulo `u^prec`: a summand with valuation `l·q^{deg c}` is included iff
//! `l·q^{deg c} < prec`, so truncated sums are exact.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{chi_t, APoly, Field, ThetaTPoly};
use crate::error::{Error, Result};
use crate::useries::{sum_series, USeries};

/// Sign `s` in `𝔼 = s · h · τ(d₂)`, with `𝔼 = Σ χ_t(c) u_c` as ground truth.
pub const EE_SIGN: i64 = 1;

/// `θ^{q^k}` and `t - θ^{q^k}`.
pub(crate) fn theta_power(field: &Field, k: u32) -> ThetaTPoly {
    ThetaTPoly::theta(field).tau(k)
}

pub(crate) fn t_minus_theta_qk(field: &Field, k: u32) -> ThetaTPoly {
    ThetaTPoly::t(field).sub(&theta_power(field, k))
}

/// Bracket `[n] = θ^{q^n} - θ`.
pub fn bracket(field: &Field, n: u32) -> ThetaTPoly {
    theta_power(field, n).sub(&ThetaTPoly::theta(field))
}

/// Forms at a fixed field and `u`-precision, built lazily and then cached.
pub struct FormCatalog {
    field: Field,
    prec: usize,
    u_c: Vec<Vec<(APoly, USeries)>>,
    g: OnceLock<USeries>,
    h: OnceLock<USeries>,
    delta: OnceLock<USeries>,
    e: OnceLock<USeries>,
    ee: OnceLock<USeries>,
    d2: OnceLock<USeries>,
}

impl FormCatalog {
    pub fn new(field: &Field, prec: usize) -> Result<FormCatalog> {
        if prec == 0 {
            return Err(Error::PrecisionUnderflow("forms requested at precision 0".into()));
        }
        Ok(FormCatalog {
            field: field.clone(),
            prec,
            u_c: crate::useries::carlitz::all_u_c(field, prec)?,
            g: OnceLock::new(),
            h: OnceLock::new(),
            delta: OnceLock::new(),
            e: OnceLock::new(),
            ee: OnceLock::new(),
            d2: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// `Σ_{c ∈ A_+} coeff(c) u_c^power mod u^prec`.
    pub fn a_expansion<F>(&self, power: u64, coeff: F) -> Result<USeries>
    where
        F: Fn(&APoly) -> ThetaTPoly + Sync,
    {
        let prec = self.prec;
        let q = self.q() as u64;
        let terms: Result<Vec<USeries>> = self
            .u_c
            .iter()
            .enumerate()
            .take_while(|(d, _)| power * q.pow(*d as u32) < prec as u64)
            .flat_map(|(_, level)| level.iter())
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(c, uc)| {
                let a = coeff(c);
                if a.is_zero() {
                    return Ok(USeries::zero(&self.field, prec));
                }
                Ok(uc.pow(power)?.truncate(prec).scale(&a))
            })
            .collect();
        Ok(sum_series(&self.field, prec, terms?.iter()))
    }

    /// `g = 1 - (θ^q - θ) Σ u_c^{q-1}`.
    pub fn g(&self) -> Result<&USeries> {
        if let Some(g) = self.g.get() {
            return Ok(g);
        }
        let f = &self.field;
        let s = self.a_expansion(self.q() as u64 - 1, |_| ThetaTPoly::one(f))?;
        let g = USeries::one(f, self.prec).sub(&s.scale(&bracket(f, 1)))?;
        Ok(self.g.get_or_init(|| g))
    }

    /// `h = Σ c^q u_c`.
    pub fn h(&self) -> Result<&USeries> {
        if let Some(h) = self.h.get() {
            return Ok(h);
        }
        let h = self.a_expansion(1, |c| c.frobenius_twist(1).to_theta_t())?;
        Ok(self.h.get_or_init(|| h))
    }

    /// `Δ = -h^{q-1}`.
    pub fn delta(&self) -> Result<&USeries> {
        if let Some(d) = self.delta.get() {
            return Ok(d);
        }
        let d = self.h()?.pow(self.q() as u64 - 1)?.truncate(self.prec).neg();
        Ok(self.delta.get_or_init(|| d))
    }

    /// Gekeler's false Eisenstein series `E = Σ c u_c`.
    pub fn false_e(&self) -> Result<&USeries> {
        if let Some(e) = self.e.get() {
            return Ok(e);
        }
        let e = self.a_expansion(1, APoly::to_theta_t)?;
        Ok(self.e.get_or_init(|| e))
    }

    /// `𝔼 = Σ χ_t(c) u_c`.
    pub fn ee(&self) -> Result<&USeries> {
        if let Some(e) = self.ee.get() {
            return Ok(e);
        }
        let e = self.a_expansion(1, chi_t)?;
        Ok(self.ee.get_or_init(|| e))
    }

    /// `d₂` as the unit-constant solution of
    /// `X = g τ(X) + Δ (t - θ^q) τ²(X)`, by `u`-adic fixed-point iteration.
    pub fn d2(&self) -> Result<&USeries> {
        if let Some(d) = self.d2.get() {
            return Ok(d);
        }
        let d = self.d2_fixed_point()?;
        Ok(self.d2.get_or_init(|| d))
    }

    fn d2_fixed_point(&self) -> Result<USeries> {
        let prec = self.prec;
        let f = &self.field;
        let g = self.g()?.clone();
        let b = self.delta()?.scale(&t_minus_theta_qk(f, 1));
        let budget = prec + 2;
        let mut x = USeries::one(f, prec);
        for _ in 0..budget {
            let next = g
                .mul(&x.tau_truncated(1, prec))?
                .add(&b.mul(&x.tau_truncated(2, prec))?)?
                .truncate(prec);
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Err(Error::NoConvergence(budget))
    }

    /// `f_{l,ν} = Σ c^{l q^ν} u_c^l` for `1 ≤ l ≤ q`.
    pub fn f_l_nu(&self, l: u32, nu: u32) -> Result<USeries> {
        self.check_l(l)?;
        self.a_expansion(l as u64, |c| c.frobenius_twist(nu).pow(l as u64).to_theta_t())
    }

    /// `f_s = Σ c^{1 + s(q-1)} u_c`.
    pub fn f_s(&self, s: u32) -> Result<USeries> {
        if s == 0 {
            return Err(Error::OutOfRange("f_s needs s >= 1".into()));
        }
        let e = 1 + s as u64 * (self.q() as u64 - 1);
        self.a_expansion(1, |c| c.pow(e).to_theta_t())
    }

    /// `Σ χ_t(c)^l u_c^l` for any `l ≥ 1`.
    pub fn ee_power_expansion(&self, l: u32) -> Result<USeries> {
        if l == 0 {
            return Err(Error::OutOfRange("l must be at least 1".into()));
        }
        self.a_expansion(l as u64, |c| chi_t(c).pow(l as u64))
    }

    fn check_l(&self, l: u32) -> Result<()> {
        if l == 0 || l > self.q() {
            return Err(Error::OutOfRange(format!("l = {l} outside 1..={}", self.q())));
        }
        Ok(())
    }
}

/// Outcome of comparing two expansions of the same object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub label: String,
    /// Precision the comparison was carried out to.
    pub prec: usize,
    pub equal: bool,
    pub first_difference: Option<usize>,
}

impl ComparisonReport {
    pub fn compare(label: impl Into<String>, lhs: &USeries, rhs: &USeries) -> ComparisonReport {
        let first_difference = lhs.first_difference(rhs);
        ComparisonReport {
            label: label.into(),
            prec: lhs.prec().min(rhs.prec()),
            equal: first_difference.is_none(),
            first_difference,
        }
    }
}

/// `𝔼^l` against `Σ χ_t(c)^l u_c^l`. Any `l ≥ 1` is accepted; the identity
/// is a theorem only for `l ≤ q`.
pub fn check_ee_power(cat: &FormCatalog, l: u32) -> Result<ComparisonReport> {
    let lhs = cat.ee()?.pow(l as u64)?.truncate(cat.prec());
    let rhs = cat.ee_power_expansion(l)?;
    Ok(ComparisonReport::compare(format!("EE^{l}"), &lhs, &rhs))
}

/// `f_{1,ν}^l` against `f_{l,ν}`.
pub fn check_f_power(cat: &FormCatalog, l: u32, nu: u32) -> Result<ComparisonReport> {
    cat.check_l(l)?;
    if nu == 0 {
        return Err(Error::OutOfRange("nu must be at least 1".into()));
    }
    let lhs = cat.f_l_nu(1, nu)?.pow(l as u64)?.truncate(cat.prec());
    let rhs = cat.f_l_nu(l, nu)?;
    Ok(ComparisonReport::compare(format!("f_(1,{nu})^{l} = f_({l},{nu})"), &lhs, &rhs))
}

/// `f_{l,1} = h^l` and `f_{l,2} = h^l g^{lq}`.
pub fn check_f_closed_forms(cat: &FormCatalog, l: u32) -> Result<Vec<ComparisonReport>> {
    let prec = cat.prec();
    let h_l = cat.h()?.pow(l as u64)?.truncate(prec);
    let g_lq = cat.g()?.pow(l as u64 * cat.q() as u64)?.truncate(prec);
    let nu1 = ComparisonReport::compare(format!("f_({l},1) = h^{l}"), &cat.f_l_nu(l, 1)?, &h_l);
    let nu2 = ComparisonReport::compare(
        format!("f_({l},2) = h^{l} g^({l}q)"),
        &cat.f_l_nu(l, 2)?,
        &h_l.mul(&g_lq)?.truncate(prec),
    );
    Ok(vec![nu1, nu2])
}

/// `f_s d₂` against `Σ χ_t(c) c^{s(q-1)} u_c`, plus the same comparison
/// after `t -> θ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub s: u32,
    pub comparison: ComparisonReport,
    pub specialized: ComparisonReport,
}

pub fn conjecture_fs(cat: &FormCatalog, s: u32) -> Result<ConjectureReport> {
    let prec = cat.prec();
    let lhs = cat.f_s(s)?.mul(cat.d2()?)?.truncate(prec);
    let e = s as u64 * (cat.q() as u64 - 1);
    let rhs = cat.a_expansion(1, |c| chi_t(c).mul(&c.pow(e).to_theta_t()))?;
    Ok(ConjectureReport {
        s,
        comparison: ComparisonReport::compare(format!("f_{s} d2"), &lhs, &rhs),
        specialized: ComparisonReport::compare(
            format!("f_{s} d2 at t = θ"),
            &lhs.subst_t_theta(),
            &rhs.subst_t_theta(),
        ),
    })
}

/// Which family supplies the inner terms of a candidate recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InnerFamily {
    /// `f_{1,ν-1}`, `f_{1,ν-2}`
    F1,
    /// `f_{2,ν-1}`, `f_{2,ν-2}`
    F2,
}

/// Candidate coefficient of the `τ²`-term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BracketVariant {
    /// `[ν-2]^{q²} = θ^{q^ν} - θ^{q²}`
    TwistedNuMinus2,
    /// `[ν-2] = θ^{q^{ν-2}} - θ`
    NuMinus2,
    /// `[ν] = θ^{q^ν} - θ`
    Nu,
    /// `[ν-1]^q = θ^{q^ν} - θ^q`
    TwistedNuMinus1,
}

impl BracketVariant {
    pub const ALL: [BracketVariant; 4] = [
        BracketVariant::TwistedNuMinus2,
        BracketVariant::NuMinus2,
        BracketVariant::Nu,
        BracketVariant::TwistedNuMinus1,
    ];

    pub fn value(self, field: &Field, nu: u32) -> ThetaTPoly {
        match self {
            BracketVariant::TwistedNuMinus2 => bracket(field, nu - 2).tau(2),
            BracketVariant::NuMinus2 => bracket(field, nu - 2),
            BracketVariant::Nu => bracket(field, nu),
            BracketVariant::TwistedNuMinus1 => bracket(field, nu - 1).tau(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionCandidate {
    pub inner: InnerFamily,
    pub bracket: BracketVariant,
    /// Whether the numerator was divisible by `u^{q-1}` (and so by `h^{q-1}`).
    pub exact_division: bool,
    pub matches: bool,
    pub first_difference: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub nu: u32,
    pub prec: usize,
    pub candidates: Vec<RecursionCandidate>,
    /// For a unique match: `(l, R^l == f_{l,ν})` for `1 ≤ l ≤ q`.
    pub power_checks: Vec<(u32, bool)>,
}

impl RecursionReport {
    pub fn matching(&self) -> Vec<&RecursionCandidate> {
        self.candidates.iter().filter(|c| c.matches).collect()
    }
}

/// Tests candidate forms of
/// `f_{1,ν} = (g^q / h^{q-1}) F_{ν-1}^q - (B / h^{q-1}) F_{ν-2}^{q²}`
/// against the directly summed `f_{1,ν}`.
pub fn resolve_recursive(cat: &FormCatalog, nu: u32) -> Result<RecursionReport> {
    if nu < 2 {
        return Err(Error::OutOfRange("the recursion needs nu >= 2".into()));
    }
    let f = cat.field();
    let q = cat.q() as usize;
    let prec = cat.prec();
    if prec <= q {
        return Err(Error::PrecisionUnderflow(format!("precision {prec} too small for h^(q-1) division")));
    }
    let work = prec + q;
    let target = cat.f_l_nu(1, nu)?;
    let g_q = cat.g()?.pow(q as u64)?.truncate(work);
    // h = u · unit, so 1/h^{q-1} = u^{-(q-1)} · (h/u)^{-(q-1)}
    let h_unit_inv = cat.h()?.shift_down(1)?.inv()?.pow(q as u64 - 1)?;

    let mut candidates = Vec::new();
    let mut results = Vec::new();
    for inner in [InnerFamily::F1, InnerFamily::F2] {
        let l = match inner {
            InnerFamily::F1 => 1,
            InnerFamily::F2 => 2,
        };
        if l > cat.q() {
            continue;
        }
        let prev = cat.f_l_nu(l, nu - 1)?.pow(q as u64)?.truncate(work);
        let prev2 = cat.f_l_nu(l, nu - 2)?.pow((q * q) as u64)?.truncate(work);
        let first = g_q.mul(&prev)?;
        for bracket in BracketVariant::ALL {
            let numer = first.sub(&prev2.scale(&bracket.value(f, nu)))?;
            let (exact_division, result) = match numer.shift_down(q - 1) {
                Ok(shifted) => (true, Some(shifted.mul(&h_unit_inv)?)),
                Err(Error::InexactDivision(_)) => (false, None),
                Err(e) => return Err(e),
            };
            let first_difference = match &result {
                Some(r) => r.first_difference(&target),
                None => Some(numer.valuation()),
            };
            let matches = exact_division && first_difference.is_none();
            candidates.push(RecursionCandidate { inner, bracket, exact_division, matches, first_difference });
            results.push(result);
        }
    }

    let mut power_checks = Vec::new();
    let matched: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].matches).collect();
    if let [only] = matched.as_slice() {
        let r = results[*only].as_ref().expect("matching candidates divided exactly");
        for l in 1..=cat.q() {
            let lhs = r.pow(l as u64)?;
            let rhs = cat.f_l_nu(l, nu)?;
            power_checks.push((l, lhs.agrees_with(&rhs)));
        }
    }
    Ok(RecursionReport { nu, prec: prec - 1, candidates, power_checks })
}

pub fn eisenstein_g(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.g().cloned()
}

pub fn eisenstein_h(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.h().cloned()
}

pub fn delta(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.delta().cloned()
}

pub fn false_e(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.false_e().cloned()
}

pub fn ee_series(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.ee().cloned()
}

pub fn d2_fixed_point(field: &Field, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.d2().cloned()
}

pub fn f_l_nu(field: &Field, l: u32, nu: u32, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.f_l_nu(l, nu)
}

pub fn f_s_series(field: &Field, s: u32, prec: usize) -> Result<USeries> {
    FormCatalog::new(field, prec)?.f_s(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{monic_below, Fq};

    fn fp(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn g_leading_terms() {
        for p in [2, 3, 5] {
            let f = fp(p);
            let q = p as usize;
            let g = eisenstein_g(&f, 2 * q * q).unwrap();
            assert_eq!(g.coeff(0).unwrap(), ThetaTPoly::one(&f));
            for j in 1..q - 1 {
                assert!(g.coeff(j).unwrap().is_zero());
            }
            assert_eq!(g.coeff(q - 1).unwrap(), bracket(&f, 1).neg());
            assert!(g.is_t_free());
        }
        let f = fp(3);
        assert_eq!(eisenstein_g(&f, 1).unwrap(), USeries::one(&f, 1));
    }

    #[test]
    fn h_delta_e_leading_terms() {
        for p in [2, 3, 5] {
            let f = fp(p);
            let q = p as usize;
            let cat = FormCatalog::new(&f, 2 * q * q).unwrap();
            let h = cat.h().unwrap();
            assert_eq!(h.valuation(), 1);
            assert_eq!(h.coeff(1).unwrap(), ThetaTPoly::one(&f));
            let d = cat.delta().unwrap();
            assert_eq!(d.valuation(), q - 1);
            assert!(d.add(&h.pow(q as u64 - 1).unwrap()).unwrap().is_zero());
            let e = cat.false_e().unwrap();
            assert_eq!(e.coeff(1).unwrap(), ThetaTPoly::one(&f));
            assert_eq!(cat.ee().unwrap().coeff(1).unwrap(), ThetaTPoly::one(&f));
        }
    }

    /// Direct double sum `Σ_c a_c Σ_n [u^n] u_c`, independent of the
    /// catalog's cut-off bookkeeping: every monic `c` of degree `≤ 3` is
    /// included whether or not it can contribute.
    fn brute_a_expansion(f: &Field, prec: usize, coeff: impl Fn(&APoly) -> ThetaTPoly) -> USeries {
        let mut acc = USeries::zero(f, prec);
        for c in monic_below(f, 4) {
            let uc = crate::useries::u_c_expansion(&c, prec).unwrap();
            acc = acc.add(&uc.scale(&coeff(&c))).unwrap();
        }
        acc
    }

    #[test]
    fn cutoff_matches_unbounded_sum() {
        let f = fp(2);
        let cat = FormCatalog::new(&f, 12).unwrap();
        assert_eq!(*cat.false_e().unwrap(), brute_a_expansion(&f, 12, APoly::to_theta_t));
        assert_eq!(*cat.ee().unwrap(), brute_a_expansion(&f, 12, chi_t));
    }

    #[test]
    fn ee_at_t_equals_theta_is_e() {
        for p in [2, 3] {
            let cat = FormCatalog::new(&fp(p), 40).unwrap();
            assert_eq!(cat.ee().unwrap().subst_t_theta(), *cat.false_e().unwrap());
        }
    }

    #[test]
    fn d2_expansion_terms() {
        for p in [2, 3] {
            let f = fp(p);
            let q = p as usize;
            let second = (q - 1) * (q * q - q + 1);
            let d2 = d2_fixed_point(&f, second + 1).unwrap();
            let theta_minus_t = ThetaTPoly::theta(&f).sub(&ThetaTPoly::t(&f));
            assert_eq!(d2.coeff(0).unwrap(), ThetaTPoly::one(&f));
            assert_eq!(d2.coeff(q - 1).unwrap(), theta_minus_t);
            assert_eq!(d2.coeff(second).unwrap(), theta_minus_t);
        }
    }

    #[test]
    fn d2_solves_its_difference_equation() {
        for p in [2, 3] {
            let f = fp(p);
            let cat = FormCatalog::new(&f, 60).unwrap();
            let x = cat.d2().unwrap();
            let rhs = cat
                .g()
                .unwrap()
                .mul(&x.tau(1))
                .unwrap()
                .add(&cat.delta().unwrap().scale(&t_minus_theta_qk(&f, 1)).mul(&x.tau(2)).unwrap())
                .unwrap();
            assert!(x.agrees_with(&rhs));
            let spec = x.subst_t_theta();
            assert_eq!(spec.coeff(0).unwrap(), ThetaTPoly::one(&f));
            assert!(spec.coeff(p as usize - 1).unwrap().is_zero());
        }
    }

    #[test]
    fn ee_sign_against_h_tau_d2() {
        for p in [2, 3, 5] {
            let f = fp(p);
            let cat = FormCatalog::new(&f, 3 * (p * p) as usize).unwrap();
            let rhs = cat
                .h()
                .unwrap()
                .mul(&cat.d2().unwrap().tau(1))
                .unwrap()
                .scale_fq(f.from_int(EE_SIGN));
            assert!(cat.ee().unwrap().agrees_with(&rhs), "q = {p}");
        }
    }

    #[test]
    fn f_l_nu_basics() {
        let f = fp(3);
        let cat = FormCatalog::new(&f, 60).unwrap();
        assert_eq!(cat.f_l_nu(1, 0).unwrap(), *cat.false_e().unwrap());
        for l in 1..=3 {
            assert_eq!(cat.f_l_nu(l, 1).unwrap().valuation(), l as usize);
            for r in check_f_closed_forms(&cat, l).unwrap() {
                assert!(r.equal, "{r:?}");
            }
        }
        assert!(matches!(cat.f_l_nu(4, 1), Err(Error::OutOfRange(_))));
        assert!(matches!(cat.f_l_nu(0, 1), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn f_s_basics() {
        let f = fp(3);
        let cat = FormCatalog::new(&f, 30).unwrap();
        let f1 = cat.f_s(1).unwrap();
        assert_eq!(f1.valuation(), 1);
        assert_eq!(f1.coeff(1).unwrap(), ThetaTPoly::one(&f));
        assert!(f1.is_t_free());
    }

    #[test]
    fn ee_power_examples() {
        let cat = FormCatalog::new(&fp(3), 100).unwrap();
        assert!(check_ee_power(&cat, 1).unwrap().equal);
        assert!(check_ee_power(&cat, 3).unwrap().equal);
    }

    #[test]
    fn f_power_examples() {
        let cat = FormCatalog::new(&fp(3), 60).unwrap();
        assert!(check_f_power(&cat, 1, 1).unwrap().equal);
        assert!(check_f_power(&cat, 2, 1).unwrap().equal);
        let cat2 = FormCatalog::new(&fp(2), 64).unwrap();
        assert!(check_f_power(&cat2, 2, 2).unwrap().equal);
        assert!(matches!(check_f_power(&cat2, 3, 2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn recursion_at_nu_2_reproduces_h_g_q() {
        let cat = FormCatalog::new(&fp(3), 40).unwrap();
        let report = resolve_recursive(&cat, 2).unwrap();
        assert!(report
            .candidates
            .iter()
            .any(|c| c.inner == InnerFamily::F1 && c.matches));
        assert!(report.candidates.iter().all(|c| c.inner == InnerFamily::F1 || !c.matches));
    }

    #[test]
    fn recursion_at_nu_3_has_one_match() {
        for (p, prec) in [(2, 128), (3, 81)] {
            let cat = FormCatalog::new(&fp(p), prec).unwrap();
            let report = resolve_recursive(&cat, 3).unwrap();
            let m = report.matching();
            assert_eq!(m.len(), 1, "{report:?}");
            assert_eq!((m[0].inner, m[0].bracket), (InnerFamily::F1, BracketVariant::TwistedNuMinus2));
            for c in report.candidates.iter().filter(|c| !c.matches) {
                assert!(c.first_difference.unwrap() < report.prec);
            }
            assert_eq!(report.power_checks.len(), p as usize);
            assert!(report.power_checks.iter().all(|(_, ok)| *ok));
        }
    }

    #[test]
    fn conjecture_small_s() {
        let cat = FormCatalog::new(&fp(3), 80).unwrap();
        let r = conjecture_fs(&cat, 1).unwrap();
        assert!(r.comparison.equal, "{r:?}");
        assert!(r.specialized.equal);
    }

    #[test]
    fn extension_field_forms() {
        let f = Field::new(2, 2).unwrap();
        let cat = FormCatalog::new(&f, 20).unwrap();
        assert_eq!(cat.h().unwrap().coeff(1).unwrap(), ThetaTPoly::one(&f));
        assert_eq!(cat.d2().unwrap().coeff(3).unwrap(), ThetaTPoly::theta(&f).sub(&ThetaTPoly::t(&f)));
        assert!(check_ee_power(&cat, 4).unwrap().equal);
        let _ = Fq::ONE;
    }
}
