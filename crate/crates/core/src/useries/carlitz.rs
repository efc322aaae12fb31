//! The Carlitz module and the expansions `u_c = 1/φ_c(1/u)`.

use super::USeries;
use crate::algebra::{APoly, Field};
use crate::error::{Error, Result};

/// `φ_a = Σ [a, i] τ^i` as a twisted polynomial over `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarlitzOperator {
    coeffs: Vec<APoly>,
}

impl CarlitzOperator {
    /// `[a, i]` for `i = 0..=deg a`.
    pub fn coeffs(&self) -> &[APoly] {
        &self.coeffs
    }

    pub fn tau_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Twisted composition `self ∘ other`, using `τ c = c^{(1)} τ`.
    pub fn compose(&self, other: &CarlitzOperator) -> CarlitzOperator {
        let field = self.coeffs[0].field();
        let mut out = vec![APoly::zero(field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(&y.frobenius_twist(i as u32)));
            }
        }
        while out.len() > 1 && out.last().is_some_and(APoly::is_zero) {
            out.pop();
        }
        CarlitzOperator { coeffs: out }
    }
}

/// Coefficients of `φ_a`, built from `φ_θ = θ + τ` by `F_q`-linearity.
pub fn carlitz_phi(a: &APoly) -> Result<CarlitzOperator> {
    let deg = a.degree().ok_or(Error::ZeroPolynomial)?;
    let field = a.field();
    let mut acc = vec![APoly::zero(field); deg + 1];
    // power = φ_θ^k
    let mut power = vec![APoly::one(field)];
    for k in 0..=deg {
        let ak = a.coeff(k);
        if !ak.is_zero() {
            for (i, c) in power.iter().enumerate() {
                acc[i] = acc[i].add(&c.scale(ak));
            }
        }
        if k < deg {
            let mut next = vec![APoly::zero(field); power.len() + 1];
            for (i, c) in power.iter().enumerate() {
                next[i] = next[i].add(&c.mul(&APoly::theta(field).frobenius_twist(i as u32)));
                next[i + 1] = next[i + 1].add(c);
            }
            power = next;
        }
    }
    Ok(CarlitzOperator { coeffs: acc })
}

/// `u_c` modulo `u^prec` for monic `c`:
/// `u_c = u^{q^d} / Σ_{i=0}^{d} [c, i] u^{q^d - q^i}` with `d = deg c`.
pub fn u_c_expansion(c: &APoly, prec: usize) -> Result<USeries> {
    if !c.is_monic() {
        return Err(Error::NotMonic);
    }
    if prec == 0 {
        return Err(Error::PrecisionUnderflow("u_c requested at precision 0".into()));
    }
    let field: &Field = c.field();
    let d = c.degree().expect("monic polynomials are nonzero");
    let q = field.q() as usize;
    let lead = q.pow(d as u32);
    if lead >= prec {
        return Ok(USeries::zero(field, prec));
    }
    let phi = carlitz_phi(c)?;
    let inner_prec = prec - lead;
    let denom = USeries::from_terms(
        field,
        inner_prec,
        phi.coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| (lead - q.pow(i as u32), a.to_theta_t())),
    );
    Ok(denom.inv()?.shift_up(lead))
}

/// `u_c` for every monic `c` with `q^{deg c} < prec`, grouped by degree.
pub(crate) fn all_u_c(field: &Field, prec: usize) -> Result<Vec<Vec<(APoly, USeries)>>> {
    use rayon::prelude::*;
    let q = field.q() as usize;
    let mut out = Vec::new();
    let mut d = 0usize;
    while q.pow(d as u32) < prec {
        let level: Result<Vec<(APoly, USeries)>> = crate::algebra::enumerate_monic(field, d)
            .into_par_iter()
            .map(|c| u_c_expansion(&c, prec).map(|s| (c, s)))
            .collect();
        out.push(level?);
        d += 1;
    }
    Ok(out)
}
