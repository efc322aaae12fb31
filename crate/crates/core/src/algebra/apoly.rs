//! Dense univariate polynomials in `A = F_q[θ]`.

use std::fmt;

use super::bipoly::ThetaTPoly;
use super::field::{Field, Fq};
use crate::error::{Error, Result};

/// Element of `F_q[θ]`, coefficients ascending in θ, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct APoly {
    field: Field,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let digits = self.field.digits(*c);
            let cs = if self.field.is_prime_field() {
                format!("{}", digits[0])
            } else {
                format!("{digits:?}")
            };
            match (i, c.index()) {
                (0, _) => write!(f, "{cs}")?,
                (_, 1) => write!(f, "θ^{i}")?,
                _ => write!(f, "{cs}θ^{i}")?,
            }
        }
        Ok(())
    }
}

impl APoly {
    pub fn new(field: &Field, mut coeffs: Vec<Fq>) -> APoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        APoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> APoly {
        APoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> APoly {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> APoly {
        Self::new(field, vec![c])
    }

    /// The variable θ.
    pub fn theta(field: &Field) -> APoly {
        Self::monomial(field, Fq::ONE, 1)
    }

    pub fn monomial(field: &Field, c: Fq, deg: usize) -> APoly {
        let mut coeffs = vec![Fq::ZERO; deg + 1];
        coeffs[deg] = c;
        Self::new(field, coeffs)
    }

    /// Builds from small integers reduced into `F_p`.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> APoly {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    fn check_field(&self, other: &APoly) {
        assert!(self.field == other.field, "APoly operands over different fields");
    }

    pub fn add(&self, other: &APoly) -> APoly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.add(self.coeff(i), other.coeff(i))).collect();
        Self::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> APoly {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Self::new(&self.field, coeffs)
    }

    pub fn sub(&self, other: &APoly) -> APoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> APoly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &APoly) -> APoly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut k: u64) -> APoly {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Division with remainder; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &APoly) -> Result<(APoly, APoly)> {
        self.check_field(divisor);
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let f = &self.field;
        let lead_inv = f.inv(divisor.leading()).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    /// Quotient of an exact division.
    pub fn div_exact(&self, divisor: &APoly) -> Result<APoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("{self:?} by {divisor:?}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &APoly) -> APoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> APoly {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// `a(θ) -> a(θ^{q^k})`; fixes `F_q`-coefficients.
    pub fn frobenius_twist(&self, k: u32) -> APoly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let step = (self.field.q() as usize).pow(k);
        let mut coeffs = vec![Fq::ZERO; (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c;
        }
        Self::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Embedding into `F_q[θ, t]`.
    pub fn to_theta_t(&self) -> ThetaTPoly {
        ThetaTPoly::from_terms(
            &self.field,
            self.coeffs.iter().enumerate().map(|(i, &c)| ((i as u32, 0u32), c)),
        )
    }

    /// `χ_t(a) = a(t)`.
    pub fn chi_t(&self) -> ThetaTPoly {
        chi_t(self)
    }
}

/// Monic polynomials of degree `d`, ordered lexicographically by the
/// coefficient vector `(a_0, ..., a_{d-1})` with `a_0` most significant.
pub fn enumerate_monic(field: &Field, d: usize) -> Vec<APoly> {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        // a_0 is the most significant digit of idx.
        let mut coeffs = vec![Fq::ZERO; d + 1];
        let mut rest = idx;
        for i in (0..d).rev() {
            coeffs[i] = field.from_index((rest % q) as u32);
            rest /= q;
        }
        coeffs[d] = Fq::ONE;
        out.push(APoly::new(field, coeffs));
    }
    out
}

/// All monic polynomials of degree `< n`, degree by degree.
pub fn monic_below(field: &Field, n: usize) -> Vec<APoly> {
    (0..n).flat_map(|d| enumerate_monic(field, d)).collect()
}

/// All polynomials of degree `< n`, including zero (the set `A(n)`).
pub fn all_below(field: &Field, n: usize) -> Vec<APoly> {
    let q = field.q() as u64;
    (0..q.pow(n as u32))
        .map(|mut idx| {
            let coeffs = (0..n)
                .map(|_| {
                    let c = field.from_index((idx % q) as u32);
                    idx /= q;
                    c
                })
                .collect();
            APoly::new(field, coeffs)
        })
        .collect()
}

/// The evaluation character `a(θ) -> a(t)`.
pub fn chi_t(a: &APoly) -> ThetaTPoly {
    ThetaTPoly::from_terms(
        &a.field,
        a.coeffs.iter().enumerate().map(|(j, &c)| ((0u32, j as u32), c)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monic_enumeration_small_cases() {
        let f2 = Field::prime(2).unwrap();
        let d0 = enumerate_monic(&f2, 0);
        assert_eq!(d0, vec![APoly::one(&f2)]);
        let d1 = enumerate_monic(&f2, 1);
        assert_eq!(d1, vec![APoly::from_ints(&f2, &[0, 1]), APoly::from_ints(&f2, &[1, 1])]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(enumerate_monic(&f3, 2).len(), 9);
    }

    #[test]
    fn monic_enumeration_is_distinct_and_monic() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            for d in 0..4 {
                let list = enumerate_monic(&f, d);
                assert_eq!(list.len() as u64, (f.q() as u64).pow(d as u32));
                for a in &list {
                    assert!(a.is_monic());
                    assert_eq!(a.degree(), Some(d));
                }
                for w in list.windows(2) {
                    assert_ne!(w[0], w[1]);
                }
                let mut sorted = list.clone();
                sorted.sort_by_key(|a| a.coeffs.iter().map(|c| c.index()).collect::<Vec<_>>());
                sorted.dedup();
                assert_eq!(sorted.len(), list.len());
            }
        }
    }

    #[test]
    fn division_and_gcd() {
        let f = Field::prime(3).unwrap();
        let a = APoly::from_ints(&f, &[1, 1]);
        let b = APoly::from_ints(&f, &[1, 0, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.gcd(&a.mul(&a)), a);
        assert!(matches!(a.div_rem(&APoly::zero(&f)), Err(Error::ZeroPolynomial)));
        assert!(b.div_exact(&a).is_err());
    }

    #[test]
    fn zero_degree_sentinel() {
        let f = Field::prime(2).unwrap();
        assert_eq!(APoly::zero(&f).degree(), None);
        assert_eq!(APoly::one(&f).degree(), Some(0));
        assert_eq!(APoly::from_ints(&f, &[1, 0, 2]).degree(), Some(0));
    }

    #[test]
    fn chi_t_examples() {
        let f = Field::prime(2).unwrap();
        let a = APoly::from_ints(&f, &[0, 1, 1]);
        let expect = ThetaTPoly::from_terms(&f, [((0, 1), Fq::ONE), ((0, 2), Fq::ONE)]);
        assert_eq!(chi_t(&a), expect);
        assert_eq!(chi_t(&APoly::one(&f)), ThetaTPoly::one(&f));
    }

    #[test]
    fn chi_t_is_a_ring_homomorphism() {
        let f = Field::prime(2).unwrap();
        let polys = all_below(&f, 4);
        for a in &polys {
            for b in &polys {
                assert_eq!(chi_t(&a.mul(b)), chi_t(a).mul(&chi_t(b)));
                assert_eq!(chi_t(&a.add(b)), chi_t(a).add(&chi_t(b)));
            }
        }
    }
}
